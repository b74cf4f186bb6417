#include "relaxkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "relaxkit/error.hpp"
#include "relaxkit/timedomain.hpp"

namespace relaxkit::analysis {

std::string to_string(Property p) {
    switch (p) {
        case Property::CMF: return "CMF";
        case Property::SF: return "SF";
        case Property::CBF: return "CBF";
        case Property::SonineUnit: return "SonineUnit";
        case Property::MonotoneDecreasing: return "MonotoneDecreasing";
        case Property::Nonnegative: return "Nonnegative";
        case Property::UrlSlope: return "UrlSlope";
        case Property::DerivativeRelation: return "DerivativeRelation";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const PropertyReport& r) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : r.witnesses) w.push_back({x.location, x.value});
    j = {{"property", to_string(r.property)},
         {"grid", r.grid},
         {"max_violation", r.max_violation},
         {"tolerance", r.tolerance},
         {"verdict", r.pass ? "pass" : "fail"},
         {"witnesses", w}};
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxWitnesses = 16;

std::string describe(const Grid& g) {
    std::ostringstream os;
    os << (g.scheme() == GridScheme::logarithmic ? "log" : "uniform") << "[" << g.front() << ", " << g.back()
       << "] x " << g.size();
    return os.str();
}

// Collects violations and finalizes a report.
class Collector {
public:
    Collector(Property p, std::string grid, double tol) {
        rep_.property = p;
        rep_.grid = std::move(grid);
        rep_.tolerance = tol;
    }
    void add(double where, double violation) {
        if (!std::isfinite(violation)) violation = std::numeric_limits<double>::infinity();
        rep_.max_violation = std::max(rep_.max_violation, violation);
        if (violation > rep_.tolerance) rep_.witnesses.push_back({where, violation});
    }
    PropertyReport finish() {
        auto& w = rep_.witnesses;
        std::stable_sort(w.begin(), w.end(), [](const Witness& a, const Witness& b) { return a.value > b.value; });
        if (w.size() > kMaxWitnesses) w.resize(kMaxWitnesses);
        rep_.pass = rep_.max_violation <= rep_.tolerance;
        return rep_;
    }

private:
    PropertyReport rep_;
};

double binom(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

struct Derivative {
    double value;
    double noise;  // rounding-level uncertainty of the estimate
};

// n-th central difference quotient with step h and its rounding scale.
Derivative central(const RealFunction& F, double s, int n, double h) {
    double sum = 0.0, mag = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double v = F(s + (0.5 * n - k) * h);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite sample near s = " << s << " in a derivative stencil";
            throw NumericalError(os.str());
        }
        const double c = binom(n, k) * ((k % 2) ? -1.0 : 1.0);
        sum += c * v;
        mag += std::abs(c * v);
    }
    const double hn = std::pow(h, n);
    return {sum / hn, 8.0 * kEps * mag / hn};
}

// Richardson table over h = s 1e-2 2^-j, j = 0..2 (error series in h^2).
Derivative derivative(const RealFunction& F, double s, int n) {
    if (n == 0) {
        const double v = F(s);
        if (!std::isfinite(v)) throw NumericalError("non-finite function value in a sampled check");
        return {v, kEps * std::abs(v)};
    }
    constexpr int levels = 3;
    double T[levels][levels];
    double noise = 0.0;
    for (int j = 0; j < levels; ++j) {
        const Derivative d = central(F, s, n, s * 1e-2 * std::ldexp(1.0, -j));
        T[j][0] = d.value;
        noise = std::max(noise, d.noise);
        for (int k = 1; k <= j; ++k) {
            const double f = std::ldexp(1.0, 2 * k);
            T[j][k] = (f * T[j][k - 1] - T[j - 1][k - 1]) / (f - 1.0);
        }
    }
    return {T[levels - 1][levels - 1], 3.0 * noise};
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// sign_of(n) says which sign (-1, 0 meaning skip, +1) F^(n) must have.
template <class Sign>
PropertyReport alternation(Property prop, const RealFunction& F, const Grid& grid, const DerivativeCheckOptions& opt,
                           Sign sign_of) {
    detail::require(opt.max_order >= 2 && opt.max_order <= 8, "max_order must lie in [2, 8]");
    detail::require(grid.front() > 0.0, "s-grid must lie in s > 0");
    Collector col(prop, describe(grid), opt.tolerance);
    for (double s : grid.nodes()) {
        const double f0 = std::abs(F(s));
        for (int n = 0; n <= opt.max_order; ++n) {
            const int sign = sign_of(n);
            if (sign == 0) continue;
            const Derivative d = derivative(F, s, n);
            const double scale = factorial(n) * std::max(f0, std::numeric_limits<double>::min()) / std::pow(s, n);
            const double deficit = std::max(0.0, -sign * d.value - d.noise);
            col.add(s, deficit / scale);
        }
    }
    return col.finish();
}

}  // namespace

Grid default_s_grid() { return Grid::logarithmic(1e-4, 1e4, 41); }

PropertyReport check_cmf(const RealFunction& F, const Grid& s_grid, const DerivativeCheckOptions& opt) {
    return alternation(Property::CMF, F, s_grid, opt, [](int n) { return (n % 2) ? -1 : 1; });
}

PropertyReport check_cbf(const RealFunction& F, const Grid& s_grid, const DerivativeCheckOptions& opt) {
    return alternation(Property::CBF, F, s_grid, opt, [](int n) { return (n == 0 || n % 2) ? 1 : -1; });
}

PropertyReport check_stieltjes(const RealFunction& F, const Grid& s_grid, const DerivativeCheckOptions& opt) {
    for (double s : s_grid.nodes()) {
        const double v = F(s);
        if (!(v > 0.0)) {
            PropertyReport r;
            r.property = Property::SF;
            r.grid = describe(s_grid);
            r.tolerance = opt.tolerance;
            r.max_violation = std::numeric_limits<double>::infinity();
            r.pass = false;
            r.witnesses.push_back({s, v});
            return r;
        }
    }
    PropertyReport a = check_cmf(F, s_grid, opt);
    PropertyReport b = check_cbf([&F](double s) { return 1.0 / F(s); }, s_grid, opt);
    a.property = Property::SF;
    a.max_violation = std::max(a.max_violation, b.max_violation);
    a.witnesses.insert(a.witnesses.end(), b.witnesses.begin(), b.witnesses.end());
    std::stable_sort(a.witnesses.begin(), a.witnesses.end(),
                     [](const Witness& x, const Witness& y) { return x.value > y.value; });
    if (a.witnesses.size() > kMaxWitnesses) a.witnesses.resize(kMaxWitnesses);
    a.pass = a.max_violation <= a.tolerance;
    return a;
}

namespace {

// int_0^{t/2} A(u) C(t - u) du with A ~ u^(gamma-1) at 0 and C smooth on [t/2, t].
double half_integral(const GeneralizedFunction& A, const GeneralizedFunction& C, double t, int panels) {
    if (!A.regular || !C.regular) return 0.0;
    using boost::math::quadrature::gauss;
    const double L = 0.5 * t, g = A.sing_exponent;
    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        if (g == 1.0) return L * A(L * w) * C(t - L * w);
        const double u = L * std::pow(w, 1.0 / g);
        // du = (L/g) w^(1/g - 1) dw = (u / (g w)) dw
        return A(u) * C(t - u) * u / (g * w);
    };
    // The first panel is split geometrically towards w = 0, where the
    // corrections to the leading power still carry fractional exponents.
    constexpr int kGraded = 24;
    const double hw = 1.0 / panels;
    double sum = gauss<double, 20>::integrate(integrand, 0.0, std::ldexp(hw, -kGraded));
    for (int k = kGraded; k > 0; --k)
        sum += gauss<double, 20>::integrate(integrand, std::ldexp(hw, -k), std::ldexp(hw, 1 - k));
    for (int i = 1; i < panels; ++i) sum += gauss<double, 20>::integrate(integrand, i * hw, (i + 1) * hw);
    return sum;
}

}  // namespace

double convolve(const GeneralizedFunction& f, const GeneralizedFunction& g, double t, int panels) {
    detail::require(t > 0.0 && std::isfinite(t), "convolution needs t > 0");
    detail::require(panels >= 1, "panel count must be >= 1");
    double v = half_integral(f, g, t, panels) + half_integral(g, f, t, panels);
    if (f.delta_weight != 0.0) v += f.delta_weight * g(t);
    if (g.delta_weight != 0.0) v += g.delta_weight * f(t);
    return v;
}

double convolve_adaptive(const GeneralizedFunction& f, const GeneralizedFunction& g, double t, double rel_tol) {
    double prev = convolve(f, g, t, 4);
    for (int n = 8; n <= 2048; n *= 2) {
        const double v = convolve(f, g, t, n);
        if (std::abs(v - prev) <= rel_tol * std::max(std::abs(v), 1e-14)) return v;
        prev = v;
    }
    std::ostringstream os;
    os << "convolution did not settle at t = " << t << " (undeclared singularity?)";
    throw NumericalError(os.str());
}

PropertyReport sonine_residual(const GeneralizedFunction& M, const GeneralizedFunction& k, const Grid& t_grid,
                               double tolerance) {
    detail::require(t_grid.front() > 0.0, "Sonine grid must start above 0");
    Collector col(Property::SonineUnit, describe(t_grid), tolerance);
    for (double t : t_grid.nodes()) col.add(t, std::abs(convolve_adaptive(k, M, t, 1e-10) - 1.0));
    return col.finish();
}

double url_slope(const RelaxationModel& m, UrlEnd end) {
    m.validate();
    if (m.is_excess_wing()) throw InputError("the excess-wing model follows no single URL");
    const double lo = end == UrlEnd::infinity ? 1e3 : 1e-6;
    const Grid g = Grid::logarithmic(lo / m.tau, lo * 1e3 / m.tau, 31);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(g.size());
    for (double s : g.nodes()) {
        // 1 - phi^ = phi^ Psi / B keeps full relative accuracy as s -> 0.
        const double phi = models::spectral(m, s);
        const double y = end == UrlEnd::infinity ? phi : phi * models::levy_exponent(m, s) / m.B;
        const double lx = std::log(s), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

PropertyReport check_response_relaxation(const RelaxationModel& m, const Grid& t_grid, double tolerance) {
    detail::require(t_grid.front() > 0.0, "grid must lie in t > 0");
    const GeneralizedFunction phi = timedomain::response(m);
    std::vector<double> resp;
    double peak = 0.0;
    for (double t : t_grid.nodes()) {
        resp.push_back(phi(t));
        peak = std::max(peak, std::abs(resp.back()));
    }
    Collector col(Property::DerivativeRelation, describe(t_grid), tolerance);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        double T[3][3];
        for (int j = 0; j < 3; ++j) {
            const double h = t * 1e-2 * std::ldexp(1.0, -j);
            T[j][0] = (timedomain::relaxation(m, t + h) - timedomain::relaxation(m, t - h)) / (2.0 * h);
            for (int k = 1; k <= j; ++k) {
                const double f = std::ldexp(1.0, 2 * k);
                T[j][k] = (f * T[j][k - 1] - T[j - 1][k - 1]) / (f - 1.0);
            }
        }
        const double scale = std::max(std::abs(resp[i]), 1e-3 * peak);
        col.add(t, std::abs(resp[i] + T[2][2]) / scale);
    }
    return col.finish();
}

PropertyReport check_nonnegative(const RealFunction& f, const Grid& grid, double tolerance) {
    Collector col(Property::Nonnegative, describe(grid), tolerance);
    for (double t : grid.nodes()) col.add(t, std::max(0.0, -f(t)));
    return col.finish();
}

PropertyReport check_monotone_decreasing(const RealFunction& f, const Grid& grid, double tolerance) {
    Collector col(Property::MonotoneDecreasing, describe(grid), tolerance);
    double prev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = f(grid[i]);
        col.add(grid[i], std::max(0.0, v - prev));
        prev = v;
    }
    return col.finish();
}

}  // namespace relaxkit::analysis
