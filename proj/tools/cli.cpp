#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaxkit/analysis.hpp"
#include "relaxkit/error.hpp"
#include "relaxkit/evolution.hpp"
#include "relaxkit/fit.hpp"
#include "relaxkit/models.hpp"
#include "relaxkit/timedomain.hpp"

namespace relaxkit::cli {

namespace {

using nlohmann::json;

enum class Level { error, warn, info, debug };

class Log {
public:
    explicit Log(std::ostream& err) : err_(err) {
        const char* env = std::getenv("RELAXKIT_LOG");
        if (!env) return;
        static const std::map<std::string, Level> names{
            {"error", Level::error}, {"warn", Level::warn}, {"info", Level::info}, {"debug", Level::debug}};
        const auto it = names.find(env);
        if (it == names.end())
            warn(std::string("ignoring unknown RELAXKIT_LOG value '") + env + "'");
        else
            level_ = it->second;
    }
    void write(Level l, const std::string& msg) {
        static const char* tag[] = {"error", "warn", "info", "debug"};
        if (l <= level_) err_ << "relaxkit: " << tag[static_cast<int>(l)] << ": " << msg << '\n';
    }
    void error(const std::string& m) { write(Level::error, m); }
    void warn(const std::string& m) { write(Level::warn, m); }
    void info(const std::string& m) { write(Level::info, m); }
    void debug(const std::string& m) { write(Level::debug, m); }

private:
    std::ostream& err_;
    Level level_ = Level::warn;
};

struct Options {
    std::string model;
    std::optional<double> alpha, beta, tau, tau1, tau2, rate_B;
    std::string target;
    std::string suite = "all";
    std::string grid;
    std::optional<double> s, t, omega;
    double eps0 = 2.0, epsinf = 1.0;
    std::string format;
    std::uint64_t seed = fit::FitOptions{}.seed;
    std::string config;
    std::optional<double> tol;
    std::string scheme = "pt";
    std::string data;
};

// Option names accepted on the command line and as config-file keys.
const std::set<std::string> config_keys{"model", "alpha", "beta",  "tau",   "tau1",   "tau2", "rate-B",
                                        "target", "suite", "grid", "s",     "t",      "omega", "eps0",
                                        "epsinf", "format", "seed", "tol",  "scheme", "data"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void add_model_options(CLI::App& app, Options& o) {
    app.add_option("--model", o.model, "debye, cc, cd, hn, jws or ew")->required();
    app.add_option("--alpha", o.alpha, "shape parameter alpha");
    app.add_option("--beta", o.beta, "shape parameter beta");
    app.add_option("--tau", o.tau, "time constant (all models except ew)");
    app.add_option("--tau1", o.tau1, "first time constant (ew)");
    app.add_option("--tau2", o.tau2, "second time constant (ew)");
    app.add_option("--rate-B", o.rate_B, "rate constant B (default 1/tau, 1/tau1 for ew)");
}

void add_common_options(CLI::App& app, Options& o) {
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", o.config, "key=value file; flags given on the command line win");
    app.add_option("--tol", o.tol, "tolerance override");
}

RelaxationModel build_model(const Options& o) {
    const ModelKind kind = parse_model_kind(o.model);
    auto forbid = [&](const std::optional<double>& v, const char* flag) {
        if (v) throw InputError(std::string("--") + flag + " does not apply to model " + o.model);
    };
    const double alpha = o.alpha.value_or(1.0), beta = o.beta.value_or(1.0);
    if (kind == ModelKind::ExcessWing) {
        forbid(o.tau, "tau");
        forbid(o.beta, "beta");
        if (!o.tau1 || !o.tau2) throw InputError("model ew requires both --tau1 and --tau2");
        if (!o.alpha) throw InputError("model ew requires --alpha (0 < alpha < 1)");
        return RelaxationModel::excess_wing(alpha, *o.tau1, *o.tau2, o.rate_B);
    }
    forbid(o.tau1, "tau1");
    forbid(o.tau2, "tau2");
    const double tau = o.tau.value_or(1.0);
    switch (kind) {
        case ModelKind::Debye:
            forbid(o.alpha, "alpha");
            forbid(o.beta, "beta");
            return RelaxationModel::debye(tau, o.rate_B);
        case ModelKind::ColeCole: forbid(o.beta, "beta"); return RelaxationModel::cole_cole(alpha, tau, o.rate_B);
        case ModelKind::ColeDavidson:
            forbid(o.alpha, "alpha");
            return RelaxationModel::cole_davidson(beta, tau, o.rate_B);
        case ModelKind::HavriliakNegami: return RelaxationModel::havriliak_negami(alpha, beta, tau, o.rate_B);
        case ModelKind::JWS: return RelaxationModel::jws(alpha, beta, tau, o.rate_B);
        default: break;
    }
    throw InputError("unknown model " + o.model);
}

// "start:stop:count:log|lin"
Grid parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 4) throw InputError("--grid expects start:stop:count:log|lin, got '" + spec + "'");
    double a, b;
    long n;
    try {
        std::size_t used = 0;
        a = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("start");
        b = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("stop");
        n = std::stol(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("count");
    } catch (const std::logic_error&) {
        throw InputError("--grid: cannot parse '" + spec + "'");
    }
    if (n < 2) throw InputError("--grid: count must be at least 2");
    if (parts[3] == "lin") return Grid::uniform(a, b, static_cast<std::size_t>(n - 1));
    if (parts[3] == "log") return Grid::logarithmic(a, b, static_cast<std::size_t>(n));
    throw InputError("--grid: spacing must be 'log' or 'lin', got '" + parts[3] + "'");
}

std::vector<double> abscissae(const Options& o, const std::optional<double>& point, const char* flag) {
    if (!o.grid.empty() && point) throw InputError(std::string("give either --grid or --") + flag + ", not both");
    if (point) return {*point};
    if (!o.grid.empty()) return parse_grid(o.grid).nodes();
    throw InputError(std::string("--") + flag + " or --grid is required");
}

int cmd_eval(const Options& o, std::ostream& out, Log& log) {
    const RelaxationModel m = build_model(o);
    const std::string& target = o.target;
    static const std::set<std::string> targets{"spectral",  "response", "relaxation",
                                               "kernel-M",  "kernel-k", "permittivity"};
    if (!targets.count(target)) throw InputError("unknown --target '" + target + "'");

    const char* axis = target == "spectral" ? "s" : target == "permittivity" ? "omega" : "t";
    const auto xs = abscissae(o, target == "spectral" ? o.s : target == "permittivity" ? o.omega : o.t, axis);
    if (target != "spectral" && o.s) throw InputError("--s does not apply to target " + target);
    if (target != "permittivity" && o.omega) throw InputError("--omega does not apply to target " + target);
    if ((target == "spectral" || target == "permittivity") && o.t)
        throw InputError("--t does not apply to target " + target);
    for (double x : xs)
        if (!(x > 0)) throw InputError(std::string(axis) + " values must be positive");
    log.info("eval " + target + " for " + to_string(m.kind) + " at " + std::to_string(xs.size()) + " points");

    const bool json_out = o.format == "json";
    if (target == "permittivity") {
        std::vector<PermittivityPoint> pts;
        for (double w : xs) pts.push_back(models::complex_permittivity(m, w, o.eps0, o.epsinf));
        if (json_out) {
            json rows = json::array();
            for (const auto& p : pts)
                rows.push_back({{"omega", p.omega}, {"eps_real", p.eps_real}, {"eps_imag", p.eps_imag}});
            const json doc{{"target", target}, {"model", m}, {"eps0", o.eps0}, {"epsinf", o.epsinf}, {"points", rows}};
            out << doc.dump(2) << '\n';
        } else {
            std::ostringstream s;
            s << "omega,eps_real,eps_imag\n";
            for (const auto& p : pts) s << fmt(p.omega) << ',' << fmt(p.eps_real) << ',' << fmt(p.eps_imag) << '\n';
            out << s.str();
        }
        return ok;
    }

    std::vector<double> values;
    double delta = 0.0;
    bool has_delta = false;
    for (double x : xs) {
        if (target == "spectral") {
            values.push_back(models::spectral(m, x));
        } else if (target == "relaxation") {
            values.push_back(timedomain::relaxation(m, x));
        } else {
            const PointValue v = target == "response" ? timedomain::response(m, x)
                                 : target == "kernel-M" ? timedomain::kernel_M(m, x)
                                                        : timedomain::kernel_k(m, x);
            values.push_back(v.regular);
            delta = v.delta_weight;
            has_delta = true;
        }
    }
    if (json_out) {
        json rows = json::array();
        for (std::size_t i = 0; i < xs.size(); ++i) rows.push_back({{axis, xs[i]}, {"value", values[i]}});
        json doc{{"target", target}, {"model", m}, {"points", rows}};
        if (has_delta) doc["delta_weight"] = delta;
        out << doc.dump(2) << '\n';
    } else {
        std::ostringstream s;
        if (has_delta) s << "# delta_weight=" << fmt(delta) << '\n';
        s << axis << ",value\n";
        for (std::size_t i = 0; i < xs.size(); ++i) s << fmt(xs[i]) << ',' << fmt(values[i]) << '\n';
        out << s.str();
    }
    return ok;
}

struct NamedReport {
    std::string suite, subject;
    analysis::PropertyReport report;
};

analysis::PropertyReport url_report(const RelaxationModel& m, analysis::UrlEnd end, double expected, double tol) {
    analysis::PropertyReport r;
    r.property = analysis::Property::UrlSlope;
    const double slope = analysis::url_slope(m, end);
    r.grid = end == analysis::UrlEnd::infinity ? "s in [1e3, 1e6]/tau, 31 log nodes"
                                                : "s in [1e-6, 1e-3]/tau, 31 log nodes";
    r.max_violation = std::abs(slope - expected);
    r.tolerance = tol;
    r.pass = r.max_violation <= tol;
    r.witnesses.push_back({end == analysis::UrlEnd::infinity ? 1e6 / m.time_scale() : 1e-6 / m.time_scale(), slope});
    return r;
}

std::vector<NamedReport> run_suite(const std::string& suite, const RelaxationModel& m, const Options& o, Log& log) {
    std::vector<NamedReport> out;
    const double ts = m.time_scale();
    auto time_grid = [&](Grid fallback) { return o.grid.empty() ? fallback : parse_grid(o.grid); };

    if (suite == "stieltjes") {
        analysis::DerivativeCheckOptions opt;
        if (o.tol) opt.tolerance = *o.tol;
        const Grid g = o.grid.empty() ? analysis::default_s_grid() : parse_grid(o.grid);
        auto sf = [&](const char* name, double (*F)(const RelaxationModel&, double)) {
            out.push_back({suite, name, analysis::check_stieltjes([&](double s) { return F(m, s); }, g, opt)});
        };
        sf("spectral", models::spectral);
        sf("M_hat", models::memory_M_hat);
        sf("k_hat", models::memory_k_hat);
        out.push_back({suite, "levy_exponent",
                       analysis::check_cbf([&](double s) { return models::levy_exponent(m, s); }, g, opt)});
    } else if (suite == "sonine") {
        const Grid g = time_grid(Grid::logarithmic(0.01 * ts, 10 * ts, 40));
        out.push_back({suite, "k*M", analysis::sonine_residual(timedomain::kernel_M(m), timedomain::kernel_k(m), g,
                                                               o.tol.value_or(1e-4))});
    } else if (suite == "url") {
        const auto e = models::url_exponents(m);
        const double tol = o.tol.value_or(0.02);
        out.push_back({suite, "slope_infinity", url_report(m, analysis::UrlEnd::infinity, e.a - 1.0, tol)});
        out.push_back({suite, "slope_zero", url_report(m, analysis::UrlEnd::zero, e.b, tol)});
    } else if (suite == "equivalence") {
        evolution::SolverSettings cfg;
        cfg.grid = time_grid(Grid::uniform(0.0, 5.0 * ts, 2048));
        cfg.scheme = evolution::parse_scheme(o.scheme);
        out.push_back({suite, "M_vs_k", evolution::verify_equivalence(m, cfg, 0.05 * ts, o.tol.value_or(1e-3))});
    } else if (suite == "ew-equation") {
        if (!m.is_excess_wing()) throw InputError("suite ew-equation needs --model ew");
        const Grid g = time_grid(Grid::uniform(0.0, 5.0 * ts, 1024));
        out.push_back({suite, "n", evolution::ew_equation_residual(m, g, 0.1 * ts, o.tol.value_or(1e-3))});
    } else if (suite == "jws-identity") {
        if (!m.is_jws()) throw InputError("suite jws-identity needs --model jws");
        const Grid g = time_grid(Grid::logarithmic(0.1 * ts, 5.0 * ts, 10));
        out.push_back({suite, "K*phi", evolution::jws_convolution_identity(m, g, 4096, o.tol.value_or(1e-4))});
    } else if (suite == "all") {
        std::vector<std::string> list{"stieltjes", "sonine"};
        if (!m.is_excess_wing()) list.push_back("url");
        list.push_back("equivalence");
        if (m.is_excess_wing()) list.push_back("ew-equation");
        if (m.is_jws()) list.push_back("jws-identity");
        for (const auto& s : list) {
            auto part = run_suite(s, m, o, log);
            out.insert(out.end(), part.begin(), part.end());
        }
    } else {
        throw InputError("unknown --suite '" + suite + "'");
    }
    for (const auto& r : out)
        if (suite != "all")
            log.info(r.suite + "/" + r.subject + ": " + (r.report.pass ? "pass" : "fail") + ", violation " +
                     fmt(r.report.max_violation));
    return out;
}

int cmd_check(const Options& o, std::ostream& out, Log& log) {
    const RelaxationModel m = build_model(o);
    if (o.suite == "all" && !o.grid.empty()) throw InputError("--grid cannot be combined with --suite all");
    const auto reports = run_suite(o.suite, m, o, log);
    bool all_pass = true;
    for (const auto& r : reports) all_pass = all_pass && r.report.pass;

    if (o.format == "csv") {
        std::ostringstream s;
        s << "suite,subject,property,max_violation,tolerance,verdict\n";
        for (const auto& r : reports)
            s << r.suite << ',' << r.subject << ',' << analysis::to_string(r.report.property) << ','
              << fmt(r.report.max_violation) << ',' << fmt(r.report.tolerance) << ','
              << (r.report.pass ? "pass" : "fail") << '\n';
        out << s.str();
    } else {
        json arr = json::array();
        for (const auto& r : reports) {
            json j = r.report;
            j["suite"] = r.suite;
            j["subject"] = r.subject;
            j["model"] = m;
            arr.push_back(j);
        }
        out << arr.dump(2) << '\n';
    }
    if (!all_pass) log.warn("one or more properties failed");
    return all_pass ? ok : property_failed;
}

int cmd_fit(const Options& o, std::istream& in, std::ostream& out, Log& log) {
    const ModelKind kind = parse_model_kind(o.model);
    std::vector<PermittivityPoint> data;
    if (o.data.empty() || o.data == "-") {
        data = fit::read_permittivity_csv(in);
    } else {
        std::ifstream f(o.data);
        if (!f) throw InputError("cannot open data file '" + o.data + "'");
        try {
            data = fit::read_permittivity_csv(f);
        } catch (const InputError& e) {
            throw InputError(o.data + ": " + e.what());
        }
    }
    if (fit::single_decade(data))
        log.warn("data cover less than one decade of frequency; parameters may be poorly determined");
    fit::FitOptions opt;
    opt.seed = o.seed;
    if (o.tol) opt.tolerance = *o.tol;
    log.info("fitting " + to_string(kind) + " to " + std::to_string(data.size()) + " points");
    const auto r = fit::fit_permittivity(kind, data, opt);
    if (!r.converged) log.warn("fit did not meet its tolerance within the evaluation cap");

    if (o.format == "csv") {
        std::ostringstream s;
        s << "model,alpha,beta,tau,tau1,tau2,B,eps0,epsinf,residual_norm,iterations,converged\n";
        const bool ew = r.model.is_excess_wing();
        s << to_string(r.model.kind) << ',' << fmt(r.model.alpha) << ',' << (ew ? "" : fmt(r.model.beta)) << ','
          << (ew ? "" : fmt(r.model.tau)) << ',' << (ew ? fmt(r.model.tau1) : "") << ','
          << (ew ? fmt(r.model.tau2) : "") << ',' << fmt(r.model.B) << ',' << fmt(r.eps0) << ',' << fmt(r.epsinf)
          << ',' << fmt(r.residual_norm) << ',' << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
        out << s.str();
    } else {
        out << json(r).dump(2) << '\n';
    }
    return ok;
}

// Turns "key=value" lines into flags placed ahead of the real command line,
// so that flags given explicitly take precedence (last value wins).
std::vector<std::string> config_flags(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open config file '" + path + "'");
    std::vector<std::string> flags;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
        };
        const std::string key = strip(line.substr(0, eq)), value = strip(line.substr(eq + 1));
        if (!config_keys.count(key))
            throw InputError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        flags.push_back("--" + key);
        flags.push_back(value);
    }
    return flags;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::istream& in, std::ostream& out, std::ostream& err) {
    Log log(err);
    Options o;
    CLI::App app{"Relaxation kernels, property checks and permittivity fits", "relaxkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* eval = app.add_subcommand("eval", "evaluate a curve or kernel");
    add_model_options(*eval, o);
    add_common_options(*eval, o);
    eval->add_option("--target", o.target, "spectral, response, relaxation, kernel-M, kernel-k, permittivity")
        ->required();
    eval->add_option("--grid", o.grid, "start:stop:count:log|lin");
    eval->add_option("--s", o.s, "Laplace variable (spectral)");
    eval->add_option("--t", o.t, "time");
    eval->add_option("--omega", o.omega, "angular frequency (permittivity)");
    eval->add_option("--eps0", o.eps0, "static permittivity (permittivity)");
    eval->add_option("--epsinf", o.epsinf, "high-frequency permittivity (permittivity)");

    auto* check = app.add_subcommand("check", "run property and solver verification suites");
    add_model_options(*check, o);
    add_common_options(*check, o);
    check->add_option("--suite", o.suite, "stieltjes, sonine, url, equivalence, ew-equation, jws-identity, all");
    check->add_option("--grid", o.grid, "start:stop:count:log|lin");
    check->add_option("--scheme", o.scheme, "pt, cq1 or cq2 (equivalence)");

    auto* fitc = app.add_subcommand("fit", "fit a model to permittivity data");
    fitc->add_option("--model", o.model, "model to fit")->required();
    add_common_options(*fitc, o);
    fitc->add_option("--data", o.data, "CSV file with omega,eps_real,eps_imag (default stdin)");
    fitc->add_option("--seed", o.seed, "seed for the multi-start points");

    // The config file is expanded before parsing so its values behave like
    // flags that appear first.
    std::vector<std::string> args = args_in;
    try {
        for (std::size_t i = 0; i < args_in.size(); ++i) {
            std::string path;
            if (args_in[i] == "--config" && i + 1 < args_in.size())
                path = args_in[i + 1];
            else if (args_in[i].rfind("--config=", 0) == 0)
                path = args_in[i].substr(9);
            else
                continue;
            auto flags = config_flags(path);
            log.debug("read " + std::to_string(flags.size() / 2) + " settings from " + path);
            args.insert(args.begin() + 1, flags.begin(), flags.end());
            break;
        }
    } catch (const InputError& e) {
        log.error(e.what());
        return input_error;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        log.error(e.what());
        return input_error;
    }

    if (o.format.empty()) o.format = eval->parsed() ? "csv" : "json";
    try {
        if (eval->parsed()) return cmd_eval(o, out, log);
        if (check->parsed()) return cmd_check(o, out, log);
        return cmd_fit(o, in, out, log);
    } catch (const InputError& e) {
        log.error(e.what());
        return input_error;
    } catch (const NumericalError& e) {
        log.error(e.what());
        return numerical_error;
    } catch (const std::exception& e) {
        log.error(e.what());
        return numerical_error;
    }
}

}  // namespace relaxkit::cli
