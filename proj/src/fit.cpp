#include "relaxkit/fit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "relaxkit/error.hpp"

namespace relaxkit {

void to_json(nlohmann::json& j, const RelaxationModel& m) {
    j = nlohmann::json{{"kind", to_string(m.kind)}, {"B", m.B}};
    if (m.is_excess_wing()) {
        j["alpha"] = m.alpha;
        j["tau1"] = m.tau1;
        j["tau2"] = m.tau2;
    } else {
        j["alpha"] = m.alpha;
        j["beta"] = m.beta;
        j["tau"] = m.tau;
    }
}

}  // namespace relaxkit

namespace relaxkit::fit {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& cell, std::size_t line, const char* column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw InputError("line " + std::to_string(line) + ": cannot parse " + column + " value '" + cell + "'");
    return v;
}

// One searched coordinate: value = lo + (hi - lo) u, or exp of that when
// `log` is set, with u = (1 - cos x) / 2 so the simplex moves freely in x.
struct Coordinate {
    double lo, hi;
    bool log;
    double value(double x) const {
        const double u = 0.5 * (1.0 - std::cos(x));
        const double v = lo + (hi - lo) * u;
        return log ? std::exp(v) : v;
    }
    static double from_unit(double u) { return std::acos(1.0 - 2.0 * u); }
};

struct Problem {
    ModelKind kind;
    std::vector<Coordinate> coords;
    std::vector<PermittivityPoint> data;
    std::vector<double> weight;

    RelaxationModel model(const std::vector<double>& x) const {
        auto v = [&](std::size_t i) { return coords[i].value(x[i]); };
        switch (kind) {
            case ModelKind::Debye: return RelaxationModel::debye(v(0));
            case ModelKind::ColeCole: return RelaxationModel::cole_cole(v(0), v(1));
            case ModelKind::ColeDavidson: return RelaxationModel::cole_davidson(v(0), v(1));
            case ModelKind::HavriliakNegami: return RelaxationModel::havriliak_negami(v(0), v(1), v(2));
            case ModelKind::JWS: return RelaxationModel::jws(v(0), v(1), v(2));
            case ModelKind::ExcessWing: return RelaxationModel::excess_wing(v(0), v(1), v(2));
        }
        throw InputError("unknown model kind");
    }

    // Weighted least squares for (epsinf, delta) given the shape; returns
    // the weighted mean squared misfit.
    double solve_linear(const RelaxationModel& m, double& eps0, double& epsinf) const {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        std::vector<std::complex<double>> p(data.size());
        for (std::size_t j = 0; j < data.size(); ++j) {
            const auto q = models::complex_permittivity(m, data[j].omega, 1.0, 0.0);
            p[j] = {q.eps_real, q.eps_imag};
            const std::complex<double> d(data[j].eps_real, data[j].eps_imag);
            const double w = weight[j];
            a11 += w;
            a12 += w * p[j].real();
            a22 += w * std::norm(p[j]);
            b1 += w * d.real();
            b2 += w * (std::conj(p[j]) * d).real();
        }
        const double det = a11 * a22 - a12 * a12;
        double delta = det > 0 ? (a11 * b2 - a12 * b1) / det : 0.0;
        delta = std::max(delta, 1e-12 * (std::abs(b1) / a11 + 1e-300));
        epsinf = (b1 - a12 * delta) / a11;
        eps0 = epsinf + delta;
        double sse = 0.0;
        for (std::size_t j = 0; j < data.size(); ++j) {
            const std::complex<double> d(data[j].eps_real, data[j].eps_imag);
            sse += weight[j] * std::norm(epsinf + delta * p[j] - d);
        }
        return sse / a11;
    }

    double objective(const std::vector<double>& x) const {
        try {
            double e0, einf;
            const double f = solve_linear(model(x), e0, einf);
            return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

struct SearchResult {
    std::vector<double> x;
    double f = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

SearchResult nelder_mead(const Problem& pb, std::vector<double> x0, const FitOptions& opt) {
    const std::size_t n = x0.size();
    SearchResult res;
    const double scale = [&] {
        double s = 0;
        for (const auto& d : pb.data) s += d.eps_real * d.eps_real + d.eps_imag * d.eps_imag;
        return s / pb.data.size();
    }();

    // Two passes: the second restarts from the best vertex, which undoes the
    // occasional collapse of the simplex onto a line.
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<std::vector<double>> v(n + 1, x0);
        for (std::size_t i = 0; i < n; ++i) v[i + 1][i] += 0.3;
        std::vector<double> f(n + 1);
        for (std::size_t i = 0; i <= n; ++i) f[i] = pb.objective(v[i]);
        res.evaluations += static_cast<int>(n + 1);
        bool done = false;
        while (res.evaluations < opt.max_evaluations) {
            std::vector<std::size_t> idx(n + 1);
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return f[a] < f[b]; });
            const std::size_t best = idx.front(), worst = idx.back(), second = idx[n - 1];

            double diam = 0;
            for (std::size_t i = 0; i <= n; ++i)
                for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(v[i][k] - v[best][k]));
            if (f[worst] - f[best] <= opt.tolerance * f[best] + 1e-28 * scale || diam < 1e-10) {
                done = true;
                break;
            }

            std::vector<double> c(n, 0.0);
            for (std::size_t i = 0; i <= n; ++i)
                if (i != worst)
                    for (std::size_t k = 0; k < n; ++k) c[k] += v[i][k] / n;
            auto along = [&](double t) {
                std::vector<double> p(n);
                for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (v[worst][k] - c[k]);
                return p;
            };
            auto xr = along(-1.0);
            const double fr = pb.objective(xr);
            ++res.evaluations;
            if (fr < f[best]) {
                auto xe = along(-2.0);
                const double fe = pb.objective(xe);
                ++res.evaluations;
                if (fe < fr) {
                    v[worst] = xe, f[worst] = fe;
                } else {
                    v[worst] = xr, f[worst] = fr;
                }
                continue;
            }
            if (fr < f[second]) {
                v[worst] = xr, f[worst] = fr;
                continue;
            }
            const bool outside = fr < f[worst];
            auto xc = along(outside ? -0.5 : 0.5);
            const double fc = pb.objective(xc);
            ++res.evaluations;
            if (fc < (outside ? fr : f[worst])) {
                v[worst] = xc, f[worst] = fc;
                continue;
            }
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == best) continue;
                for (std::size_t k = 0; k < n; ++k) v[i][k] = v[best][k] + 0.5 * (v[i][k] - v[best][k]);
                f[i] = pb.objective(v[i]);
                ++res.evaluations;
            }
        }
        const auto b = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
        x0 = v[b];
        res.x = v[b];
        res.f = f[b];
        res.converged = done;
    }
    return res;
}

std::vector<double> log_weights(const std::vector<PermittivityPoint>& data) {
    const std::size_t n = data.size();
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = std::log(data[j == 0 ? 0 : j - 1].omega);
        const double hi = std::log(data[j + 1 == n ? j : j + 1].omega);
        w[j] = 0.5 * (hi - lo);
    }
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    for (auto& x : w) x /= mean;
    return w;
}

void validate_data(const std::vector<PermittivityPoint>& data) {
    detail::require(data.size() >= 8, "at least 8 data rows are required, got " + std::to_string(data.size()));
    for (std::size_t j = 0; j < data.size(); ++j) {
        detail::require(data[j].omega > 0, "omega must be positive");
        if (j > 0) detail::require(data[j].omega > data[j - 1].omega, "omega must be strictly increasing");
    }
}

}  // namespace

std::vector<PermittivityPoint> read_permittivity_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    std::array<std::size_t, 3> col{};
    std::vector<PermittivityPoint> out;
    const std::array<const char*, 3> names{"omega", "eps_real", "eps_imag"};
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cells = split(t);
        if (header.empty()) {
            header = cells;
            for (std::size_t c = 0; c < 3; ++c) {
                const auto it = std::find(header.begin(), header.end(), names[c]);
                if (it == header.end())
                    throw InputError("line " + std::to_string(lineno) + ": header is missing column '" + names[c] +
                                     "'");
                col[c] = static_cast<std::size_t>(it - header.begin());
            }
            continue;
        }
        if (cells.size() != header.size())
            throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(cells.size()));
        PermittivityPoint p;
        p.omega = parse_number(cells[col[0]], lineno, names[0]);
        p.eps_real = parse_number(cells[col[1]], lineno, names[1]);
        p.eps_imag = parse_number(cells[col[2]], lineno, names[2]);
        if (p.omega <= 0) throw InputError("line " + std::to_string(lineno) + ": omega must be positive");
        if (!out.empty() && p.omega <= out.back().omega)
            throw InputError("line " + std::to_string(lineno) + ": omega must be strictly increasing");
        out.push_back(p);
    }
    if (header.empty()) throw InputError("no header line found (expected omega,eps_real,eps_imag)");
    detail::require(out.size() >= 8, "at least 8 data rows are required, got " + std::to_string(out.size()));
    return out;
}

void write_permittivity_csv(std::ostream& out, const std::vector<PermittivityPoint>& data) {
    std::ostringstream s;
    s.precision(17);
    s << "omega,eps_real,eps_imag\n";
    for (const auto& p : data) s << p.omega << ',' << p.eps_real << ',' << p.eps_imag << '\n';
    out << s.str();
}

bool single_decade(const std::vector<PermittivityPoint>& data) {
    return data.size() < 2 || data.back().omega < 10.0 * data.front().omega;
}

void to_json(nlohmann::json& j, const FitResult& r) {
    j = nlohmann::json{{"model", r.model},           {"eps0", r.eps0},
                       {"epsinf", r.epsinf},         {"residual_norm", r.residual_norm},
                       {"iterations", r.iterations}, {"converged", r.converged}};
}

FitResult fit_permittivity(ModelKind kind, const std::vector<PermittivityPoint>& data, const FitOptions& opt) {
    validate_data(data);
    detail::require(opt.starts >= 1, "number of starts must be positive");
    detail::require(opt.max_evaluations >= 10, "evaluation cap must be at least 10");
    detail::require(opt.tolerance > 0, "fit tolerance must be positive");

    Problem pb{kind, {}, data, log_weights(data)};
    const Coordinate shape{0.05, 1.0, false};
    const Coordinate log_tau{std::log(1e-2 / data.back().omega), std::log(1e2 / data.front().omega), true};
    switch (kind) {
        case ModelKind::Debye: pb.coords = {log_tau}; break;
        case ModelKind::ColeCole:
        case ModelKind::ColeDavidson: pb.coords = {shape, log_tau}; break;
        case ModelKind::HavriliakNegami:
        case ModelKind::JWS: pb.coords = {shape, shape, log_tau}; break;
        case ModelKind::ExcessWing: pb.coords = {{0.05, 0.99, false}, log_tau, log_tau}; break;
    }

    // Latin-hypercube starts in the unit box.
    const std::size_t dim = pb.coords.size();
    const auto ns = static_cast<std::size_t>(opt.starts);
    std::mt19937_64 gen(opt.seed);
    auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<double>> starts(ns, std::vector<double>(dim));
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<std::size_t> perm(ns);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = ns; i > 1; --i) std::swap(perm[i - 1], perm[gen() % i]);
        for (std::size_t i = 0; i < ns; ++i)
            starts[i][d] = Coordinate::from_unit((static_cast<double>(perm[i]) + unit()) / static_cast<double>(ns));
    }

    std::vector<std::future<SearchResult>> jobs;
    for (const auto& x0 : starts) jobs.push_back(std::async(std::launch::async, nelder_mead, std::cref(pb), x0, opt));
    std::vector<SearchResult> results;
    for (auto& j : jobs) results.push_back(j.get());

    std::size_t best = 0;
    int evaluations = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        evaluations += results[i].evaluations;
        if (results[i].f < results[best].f) best = i;
    }
    if (!std::isfinite(results[best].f)) throw NumericalError("fit: the model could not be evaluated at any start");

    FitResult r;
    r.model = pb.model(results[best].x);
    pb.solve_linear(r.model, r.eps0, r.epsinf);
    double sse = 0.0;
    for (const auto& d : data) {
        const auto q = models::complex_permittivity(r.model, d.omega, r.eps0, r.epsinf);
        sse += std::pow(q.eps_real - d.eps_real, 2) + std::pow(q.eps_imag - d.eps_imag, 2);
    }
    r.residual_norm = std::sqrt(sse / (2.0 * static_cast<double>(data.size())));
    r.iterations = evaluations;
    r.converged = results[best].converged;
    return r;
}

}  // namespace relaxkit::fit
