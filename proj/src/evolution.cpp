#include "relaxkit/evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "relaxkit/error.hpp"
#include "relaxkit/laplace.hpp"
#include "relaxkit/mlf.hpp"
#include "relaxkit/timedomain.hpp"

namespace relaxkit::evolution {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::product_trapezoid: return "product_trapezoid";
        case Scheme::convolution_quadrature_order1: return "convolution_quadrature_order1";
        case Scheme::convolution_quadrature_order2: return "convolution_quadrature_order2";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "pt" || n == "product_trapezoid") return Scheme::product_trapezoid;
    if (n == "cq1" || n == "convolution_quadrature_order1") return Scheme::convolution_quadrature_order1;
    if (n == "cq2" || n == "convolution_quadrature_order2") return Scheme::convolution_quadrature_order2;
    throw InputError("unknown scheme '" + name + "' (expected pt, cq1 or cq2)");
}

void SolverSettings::validate() const {
    detail::require(grid.scheme() == GridScheme::uniform, "solvers need a uniform grid");
    detail::require(grid.front() == 0.0, "solver grid must start at t = 0");
    detail::require(grid.size() >= 5, "solver grid needs at least 4 steps");
    detail::require(tol > 0.0 && std::isfinite(tol), "solver tolerance must be > 0");
}

namespace {

using cd = std::complex<double>;

// Calls f(x, w) for the nodes of an n-point Gauss-Legendre rule on [a, b].
template <unsigned N, class F>
void gauss_nodes(double a, double b, F&& f) {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            f(c, r * w[i]);
        } else {
            f(c - r * x[i], r * w[i]);
            f(c + r * x[i], r * w[i]);
        }
    }
}

// Hat-function moments of the regular part of K on the cells [c h, (c+1) h]:
//   rising[c]  = int K(v) (v - c h)/h dv,  falling[c] = int K(v) ((c+1) h - v)/h dv.
struct CellMoments {
    std::vector<double> rising, falling;
};

CellMoments cell_moments(const GeneralizedFunction& K, double h, std::size_t cells) {
    CellMoments cm{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0)};
    if (!K.regular) return cm;
    const double g = K.sing_exponent;
    detail::require(g > 0.0 && g <= 1.0, "kernel singular exponent must lie in (0, 1]");
    // First cell: v = h w^(1/g) absorbs v^(g-1); graded towards w = 0.
    auto first = [&](double w, double wt) {
        if (w <= 0.0) return;
        const double v = h * std::pow(w, 1.0 / g);
        const double kv = K(v) * v / (g * w) * wt;
        cm.rising[0] += kv * (v / h);
        cm.falling[0] += kv * (1.0 - v / h);
    };
    constexpr int kGraded = 24;
    gauss_nodes<20>(0.0, std::ldexp(1.0, -kGraded), first);
    for (int k = kGraded; k > 0; --k) gauss_nodes<20>(std::ldexp(1.0, -k), std::ldexp(1.0, 1 - k), first);
    for (std::size_t c = 1; c < cells; ++c) {
        const double a = h * static_cast<double>(c);
        double r = 0.0, f = 0.0;
        gauss_nodes<10>(a, a + h, [&](double v, double wt) {
            const double kv = K(v) * wt;
            const double s = (v - a) / h;
            r += kv * s;
            f += kv * (1.0 - s);
        });
        cm.rising[c] = r;
        cm.falling[c] = f;
    }
    return cm;
}

// Discrete convolution sum_j W[n][j] y_j with
//   W[n][j] = lag[n - j] for j >= 1 (and for j = 0 under CQ),
//   W[n][0] = start[n] under product integration.
struct Weights {
    std::vector<double> lag;
    std::vector<double> start;  // empty for convolution quadrature
    double delta = 0.0;         // kernel delta weight: the exact convolution at t = 0
    double at(std::size_t n, std::size_t j) const {
        if (n == 0) return delta;
        if (j == 0 && !start.empty()) return start[n];
        return lag[n - j];
    }
};

Weights product_weights(const GeneralizedFunction& K, double h, std::size_t N) {
    const CellMoments cm = cell_moments(K, h, N);
    Weights w;
    w.lag.assign(N + 1, 0.0);
    w.start.assign(N + 1, 0.0);
    w.delta = K.delta_weight;
    w.lag[0] = cm.falling[0] + K.delta_weight;
    for (std::size_t k = 1; k <= N; ++k) {
        w.lag[k] = cm.rising[k - 1] + (k < N ? cm.falling[k] : 0.0);
        w.start[k] = cm.rising[k - 1];
    }
    return w;
}

// Lubich weights: sum_j w_j z^j = K^(delta(z)/h), recovered from samples on a
// circle of radius rho by FFT.
Weights cq_weights(const laplace::ComplexImage& Khat, double h, std::size_t N, int order) {
    std::size_t L = 1;
    while (L < 16 * (N + 1)) L <<= 1;
    const double rho = std::pow(10.0, -16.0 / static_cast<double>(L));
    fftw_complex* buf = fftw_alloc_complex(L);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(L), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    const double two_pi = 2.0 * std::acos(-1.0);
    for (std::size_t l = 0; l < L; ++l) {
        const cd z = std::polar(rho, two_pi * static_cast<double>(l) / static_cast<double>(L));
        const cd d = order == 1 ? 1.0 - z : (1.0 - z) + 0.5 * (1.0 - z) * (1.0 - z);
        const cd v = Khat(d / h);
        buf[l][0] = v.real();
        buf[l][1] = v.imag();
    }
    fftw_execute(plan);
    Weights w;
    w.lag.resize(N + 1);
    for (std::size_t j = 0; j <= N; ++j)
        w.lag[j] = buf[j][0] * std::pow(rho, -static_cast<double>(j)) / static_cast<double>(L);
    fftw_destroy_plan(plan);
    fftw_free(buf);
    for (double v : w.lag)
        if (!std::isfinite(v)) throw NumericalError("non-finite convolution-quadrature weight");
    return w;
}

// A Volterra problem a y(t) + (K * y)(t) = f(t) on the grid.
struct Problem {
    double a = 0.0;
    GeneralizedFunction kernel;  // delta included; transform needed for CQ
    std::vector<double> rhs;
    std::optional<double> y0;  // prescribed when the product rule leaves y_0 free
    double lead = 0.0;         // leading non-integer exponent of y - y(0), 0 if none
};

// Starting weights on nodes 0 and 1 that make every row of the rule exact for
// u^0 and u^q; the exact convolutions come from the kernel's transform.
struct Correction {
    std::vector<double> w0, w1;  // per row n
};

// exact (K * u^q)(t_n) minus what the rule gives, for every row.
std::vector<double> rule_defect(const Weights& W, const laplace::ComplexImage& Khat, const Grid& grid, double q) {
    const std::size_t N = grid.size() - 1;
    const double g = std::tgamma(q + 1.0);
    auto image = [&Khat, q, g](cd s) { return Khat(s) * g * std::exp(-(q + 1.0) * std::log(s)); };
    std::vector<double> pw(N + 1);
    for (std::size_t j = 0; j <= N; ++j) pw[j] = q == 0.0 ? 1.0 : (j == 0 ? 0.0 : std::pow(grid[j], q));
    std::vector<double> d(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double approx = 0.0;
        for (std::size_t j = 0; j <= n; ++j) approx += W.at(n, j) * pw[j];
        d[n] = laplace::invert_talbot(image, grid[n], 24) - approx;
    }
    return d;
}

// Product integration is already exact for constants; convolution
// quadrature is not. `lead` = 0 means no singular correction.
std::optional<Correction> starting_correction(const Weights& W, const laplace::ComplexImage& Khat, const Grid& grid,
                                              bool fix_constants, double lead) {
    const bool singular = lead > 0.0 && std::abs(lead - std::round(lead)) > 1e-6;
    if (!fix_constants && !singular) return std::nullopt;
    const std::size_t N = grid.size() - 1;
    const std::vector<double> r0 = fix_constants ? rule_defect(W, Khat, grid, 0.0) : std::vector<double>(N + 1, 0.0);
    Correction c{std::vector<double>(N + 1, 0.0), std::vector<double>(N + 1, 0.0)};
    if (singular) {
        const std::vector<double> rq = rule_defect(W, Khat, grid, lead);
        const double p1 = std::pow(grid[1], lead);
        for (std::size_t n = 1; n <= N; ++n) {
            c.w1[n] = rq[n] / p1;
            c.w0[n] = r0[n] - c.w1[n];
        }
    } else {
        c.w0 = r0;
    }
    return c;
}

struct March {
    std::vector<double> y;
    double defect = 0.0;
};

March march(const Problem& p, const SolverSettings& cfg) {
    const std::size_t N = cfg.grid.size() - 1;
    const double h = cfg.grid.step();
    Weights W;
    if (cfg.scheme == Scheme::product_trapezoid) {
        W = product_weights(p.kernel, h, N);
    } else {
        detail::require(p.kernel.has_transform(), "convolution quadrature needs the kernel's Laplace transform");
        W = cq_weights(p.kernel.transform, h, N, cfg.scheme == Scheme::convolution_quadrature_order1 ? 1 : 2);
        W.delta = p.kernel.delta_weight;
    }
    std::optional<Correction> corr;
    if (p.kernel.has_transform())
        corr = starting_correction(W, p.kernel.transform, cfg.grid, cfg.scheme != Scheme::product_trapezoid, p.lead);
    March out;
    out.y.assign(N + 1, 0.0);
    double fmax = 0.0;
    for (double v : p.rhs) fmax = std::max(fmax, std::abs(v));
    const double blowup = 1e8 * (fmax + 1.0);
    for (std::size_t n = 0; n <= N; ++n) {
        double acc = 0.0;
        double diag = p.a + W.at(n, n);
        for (std::size_t j = 0; j < n; ++j) acc += W.at(n, j) * out.y[j];
        if (corr && n >= 1) {
            acc += corr->w0[n] * out.y[0];
            if (n == 1) diag += corr->w1[n];
            else acc += corr->w1[n] * out.y[1];
        }
        if (n == 0 && p.y0) {
            out.y[0] = *p.y0;
            continue;
        }
        if (diag == 0.0) throw NumericalError("singular diagonal in the marching scheme (initial value required)");
        out.y[n] = (p.rhs[n] - acc) / diag;
        if (!std::isfinite(out.y[n]) || std::abs(out.y[n]) > blowup) {
            std::ostringstream os;
            os << "solver blew up at step " << n << " (t = " << cfg.grid[n] << ")";
            throw NumericalError(os.str());
        }
        const double defect = std::abs(diag * out.y[n] + acc - p.rhs[n]);
        out.defect = std::max(out.defect, defect / (std::abs(p.rhs[n]) + 1e-300));
    }
    return out;
}

// -n' at the nodes: fourth-order differences, the t = 0 entry is the average
// of phi over the first cell.
std::vector<double> response_from_relaxation(const std::vector<double>& n, double h) {
    const std::size_t N = n.size() - 1;
    std::vector<double> d(N + 1);
    d[0] = (n[0] - n[1]) / h;
    d[1] = -(-3 * n[0] - 10 * n[1] + 18 * n[2] - 6 * n[3] + n[4]) / (12 * h);
    for (std::size_t i = 2; i + 2 <= N; ++i) d[i] = -(-n[i + 2] + 8 * n[i + 1] - 8 * n[i - 1] + n[i - 2]) / (12 * h);
    d[N - 1] = -(3 * n[N] + 10 * n[N - 1] - 18 * n[N - 2] + 6 * n[N - 3] - n[N - 4]) / (12 * h);
    d[N] = -(25 * n[N] - 48 * n[N - 1] + 36 * n[N - 2] - 16 * n[N - 3] + 3 * n[N - 4]) / (12 * h);
    return d;
}

std::vector<double> relaxation_from_response(const std::vector<double>& phi, double h) {
    std::vector<double> n(phi.size());
    n[0] = 1.0;
    for (std::size_t i = 1; i < phi.size(); ++i) n[i] = n[i - 1] - 0.5 * h * (phi[i] + phi[i - 1]);
    return n;
}

GeneralizedFunction scaled(const GeneralizedFunction& K, double c) {
    GeneralizedFunction g = K;
    g.delta_weight *= c;
    g.sing_coefficient *= c;
    if (K.regular) g.regular = [f = K.regular, c](double t) { return c * f(t); };
    if (K.transform) g.transform = [f = K.transform, c](cd s) { return c * f(s); };
    return g;
}

// K + b (a constant added to the regular part).
GeneralizedFunction plus_constant(const GeneralizedFunction& K, double b) {
    GeneralizedFunction g = K;
    auto reg = K.regular;
    g.regular = [reg, b](double t) { return (reg ? reg(t) : 0.0) + b; };
    if (K.sing_exponent == 1.0) g.sing_coefficient += b;
    if (K.transform) g.transform = [f = K.transform, b](cd s) { return f(s) + b / s; };
    return g;
}

void require_rate(double B) { detail::require(B > 0.0 && std::isfinite(B), "rate B must be > 0"); }

}  // namespace

Solution solve_integral_eq(const GeneralizedFunction& M, double B, const SolverSettings& cfg) {
    require_rate(B);
    cfg.validate();
    detail::require(M.sing_exponent > 0.0, "kernel M must be integrable (singular exponent > 0)");
    const std::size_t N = cfg.grid.size() - 1;
    const double h = cfg.grid.step();
    Solution sol{cfg.grid, {}, {}, 0.0, 0.0, cfg.scheme};
    Problem p;
    p.kernel = scaled(M, B);
    if (M.delta_weight == 0.0 && M.sing_exponent == 1.0) {
        // phi + B (M * phi) = B M, phi bounded.
        p.a = 1.0;
        p.rhs.resize(N + 1);
        p.rhs[0] = B * M.sing_coefficient;
        for (std::size_t i = 1; i <= N; ++i) p.rhs[i] = B * M(cfg.grid[i]);
        March r = march(p, cfg);
        sol.values = std::move(r.y);
        sol.relaxation = relaxation_from_response(sol.values, h);
        sol.residual_estimate = r.defect;
    } else {
        // n + B (M * n) = 1, n - 1 ~ t^gamma.
        p.a = 1.0;
        p.lead = M.sing_exponent < 1.0 ? M.sing_exponent : 0.0;
        p.rhs.assign(N + 1, 1.0);
        March r = march(p, cfg);
        sol.relaxation = std::move(r.y);
        sol.values = response_from_relaxation(sol.relaxation, h);
        sol.residual_estimate = r.defect;
        sol.delta_weight = B * M.delta_weight / (1.0 + B * M.delta_weight);
    }
    return sol;
}

Solution solve_integrodiff_eq(const GeneralizedFunction& k, double B, const SolverSettings& cfg) {
    require_rate(B);
    cfg.validate();
    detail::require(k.sing_exponent > 0.0, "kernel k must be integrable (singular exponent > 0)");
    const std::size_t N = cfg.grid.size() - 1;
    const double h = cfg.grid.step();
    Solution sol{cfg.grid, {}, {}, 0.0, 0.0, cfg.scheme};
    Problem p;
    p.kernel = plus_constant(k, B);
    if (k.delta_weight > 0.0) {
        // d phi + (k_reg + B) * phi = B; the delta sits in the kernel.
        p.rhs.assign(N + 1, B);
        March r = march(p, cfg);
        sol.values = std::move(r.y);
        sol.relaxation = relaxation_from_response(sol.values, h);
        sol.residual_estimate = r.defect;
    } else {
        // (k + B) * m = B t with m = 1 - n, m(0) = 0.
        p.rhs.resize(N + 1);
        for (std::size_t i = 0; i <= N; ++i) p.rhs[i] = B * cfg.grid[i];
        p.y0 = 0.0;
        p.lead = k.sing_exponent < 1.0 ? 1.0 - k.sing_exponent : 0.0;  // m ~ t^(1 - gamma)
        March r = march(p, cfg);
        sol.relaxation.resize(N + 1);
        for (std::size_t i = 0; i <= N; ++i) sol.relaxation[i] = 1.0 - r.y[i];
        sol.values = response_from_relaxation(sol.relaxation, h);
        sol.residual_estimate = r.defect;
    }
    return sol;
}

namespace {

void check_samples(const std::vector<double>& f, const Grid& grid, double alpha) {
    detail::require(alpha > 0.0 && alpha < 1.0, "fractional order must lie in (0, 1)");
    detail::require(grid.scheme() == GridScheme::uniform && grid.front() == 0.0,
                    "fractional operators need a uniform grid from 0");
    detail::require(f.size() == grid.size(), "sample count does not match the grid");
    detail::require(grid.size() >= 3, "fractional operators need at least 3 nodes");
}

std::vector<double> second_order_derivative(const std::vector<double>& g, double h) {
    const std::size_t N = g.size() - 1;
    std::vector<double> d(N + 1);
    d[0] = (-3 * g[0] + 4 * g[1] - g[2]) / (2 * h);
    for (std::size_t i = 1; i < N; ++i) d[i] = (g[i + 1] - g[i - 1]) / (2 * h);
    d[N] = (3 * g[N] - 4 * g[N - 1] + g[N - 2]) / (2 * h);
    return d;
}

}  // namespace

std::vector<double> frac_integral(const std::vector<double>& f, const Grid& grid, double alpha) {
    check_samples(f, grid, alpha);
    const std::size_t N = f.size() - 1;
    const double h = grid.step();
    const double c = std::pow(h, alpha) / std::tgamma(alpha + 2.0);
    std::vector<double> p(N + 2);  // k^(alpha+1)
    for (std::size_t k = 0; k <= N + 1; ++k) p[k] = std::pow(static_cast<double>(k), alpha + 1.0);
    std::vector<double> out(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        const double dn = static_cast<double>(n);
        double s = (p[n - 1] - (dn - 1.0 - alpha) * std::pow(dn, alpha)) * f[0] + f[n];
        for (std::size_t j = 1; j < n; ++j) s += (p[n - j + 1] - 2.0 * p[n - j] + p[n - j - 1]) * f[j];
        out[n] = c * s;
    }
    return out;
}

std::vector<double> frac_deriv_rl(const std::vector<double>& f, const Grid& grid, double alpha) {
    check_samples(f, grid, alpha);
    return second_order_derivative(frac_integral(f, grid, 1.0 - alpha), grid.step());
}

std::vector<double> frac_deriv_caputo(const std::vector<double>& f, const Grid& grid, double alpha) {
    check_samples(f, grid, alpha);
    const std::size_t N = f.size() - 1;
    const double h = grid.step();
    const double c = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);
    std::vector<double> b(N);
    for (std::size_t k = 0; k < N; ++k)
        b[k] = std::pow(k + 1.0, 1.0 - alpha) - std::pow(static_cast<double>(k), 1.0 - alpha);
    std::vector<double> out(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += b[n - 1 - j] * (f[j + 1] - f[j]);
        out[n] = c * s;
    }
    return out;
}

namespace {

std::string describe(const Grid& g) {
    std::ostringstream os;
    os << (g.scheme() == GridScheme::logarithmic ? "log" : "uniform") << "[" << g.front() << ", " << g.back()
       << "] x " << g.size();
    return os.str();
}

analysis::PropertyReport finish(analysis::PropertyReport r) {
    std::stable_sort(r.witnesses.begin(), r.witnesses.end(),
                     [](const analysis::Witness& a, const analysis::Witness& b) { return a.value > b.value; });
    if (r.witnesses.size() > 16) r.witnesses.resize(16);
    r.pass = r.max_violation <= r.tolerance;
    return r;
}

void record(analysis::PropertyReport& r, double t, double v) {
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    r.max_violation = std::max(r.max_violation, v);
    if (v > r.tolerance) r.witnesses.push_back({t, v});
}

analysis::PropertyReport make_report(const Grid& g, double tolerance) {
    analysis::PropertyReport r;
    r.property = analysis::Property::DerivativeRelation;
    r.grid = describe(g);
    r.tolerance = tolerance;
    return r;
}

}  // namespace

analysis::PropertyReport verify_equivalence(const RelaxationModel& m, const SolverSettings& cfg, double t_from,
                                            double tolerance) {
    m.validate();
    const Solution a = solve_integral_eq(timedomain::kernel_M(m), m.B, cfg);
    const Solution b = solve_integrodiff_eq(timedomain::kernel_k(m), m.B, cfg);
    auto r = make_report(cfg.grid, tolerance);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        if (cfg.grid[i] < t_from) continue;
        const double scale = std::max({std::abs(a.values[i]), std::abs(b.values[i]), 1e-300});
        record(r, cfg.grid[i], std::abs(a.values[i] - b.values[i]) / scale);
    }
    return finish(r);
}

analysis::PropertyReport ew_equation_residual(const RelaxationModel& m, const Grid& grid, const std::vector<double>& n,
                                              double t_from, double tolerance) {
    m.validate();
    detail::require(m.is_excess_wing(), "ew_equation_residual needs an excess-wing model");
    check_samples(n, grid, m.alpha);
    detail::require(grid.size() >= 5, "EW residual needs at least 4 steps");
    const double h = grid.step();
    const std::vector<double> dn = response_from_relaxation(n, h);  // -n'
    const std::vector<double> frac = frac_deriv_rl(n, grid, m.alpha);
    const double c2 = std::pow(m.tau2, m.alpha);
    auto r = make_report(grid, tolerance);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] < t_from) continue;
        const double a = n[i], b = -m.tau1 * dn[i], c = c2 * frac[i];
        const double scale = std::abs(a) + std::abs(b) + std::abs(c);
        record(r, grid[i], std::abs(a + b + c) / std::max(scale, 1e-300));
    }
    return finish(r);
}

analysis::PropertyReport ew_equation_residual(const RelaxationModel& m, const Grid& grid, double t_from,
                                              double tolerance) {
    std::vector<double> n(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) n[i] = timedomain::relaxation(m, grid[i]);
    return ew_equation_residual(m, grid, n, t_from, tolerance);
}

analysis::PropertyReport jws_convolution_identity(const RelaxationModel& m, const Grid& t_grid, int steps,
                                                  double tolerance) {
    m.validate();
    detail::require(m.is_jws(), "jws_convolution_identity needs a JWS model");
    detail::require(steps >= 4, "need at least 4 steps");
    detail::require(t_grid.front() > 0.0, "identity grid must lie in t > 0");
    const double a = m.alpha, b = m.beta, ab = a * b, rate = std::pow(m.tau, -a);
    GeneralizedFunction K;
    K.delta_weight = ab == 1.0 ? 1.0 : 0.0;
    K.sing_exponent = ab < 1.0 ? 1.0 - ab : 1.0;
    K.sing_coefficient = 1.0;
    K.regular = [=](double u) { return mlf::prabhakar({a, 1.0 - ab, -b}, rate, u); };
    const GeneralizedFunction phi = timedomain::response(m);
    auto r = make_report(t_grid, tolerance);
    for (double t : t_grid.nodes()) {
        const double h = t / steps;
        const CellMoments cm = cell_moments(K, h, static_cast<std::size_t>(steps));
        std::vector<double> n(static_cast<std::size_t>(steps) + 1);
        for (int j = 0; j <= steps; ++j) n[j] = timedomain::relaxation(m, j * h);
        // phi dx = -dn, n piecewise linear: cell i meets lags in cell steps-1-i.
        double lhs = 0.0;
        for (int i = 0; i < steps; ++i) {
            const std::size_t c = static_cast<std::size_t>(steps - 1 - i);
            lhs += (n[i] - n[i + 1]) / h * (cm.rising[c] + cm.falling[c]);
        }
        lhs += K.delta_weight * phi(t) + phi.delta_weight * K(t);
        const double kt = K(t);
        const double rhs = kt - (ab < 1.0 ? std::pow(t, -ab) / std::tgamma(1.0 - ab) : 0.0);
        const double scale = std::max(std::abs(rhs), 1e-8 * std::max(std::abs(kt), 1.0));
        record(r, t, std::abs(lhs - rhs) / scale);
    }
    return finish(r);
}

}  // namespace relaxkit::evolution
