#include "relaxkit/mlf.hpp"

#include <quadmath.h>

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "relaxkit/error.hpp"
#include "relaxkit/laplace.hpp"

namespace relaxkit::mlf {

void Ml3Params::validate() const {
    detail::require(std::isfinite(nu) && std::isfinite(mu) && std::isfinite(lambda),
                    "Mittag-Leffler parameters must be finite");
    detail::require(nu > 0.0, "Mittag-Leffler order nu must be > 0");
}

void Ml2Params::validate() const {
    detail::require(std::isfinite(nu1) && std::isfinite(nu2) && std::isfinite(mu),
                    "binomial Mittag-Leffler parameters must be finite");
    detail::require(nu1 > 0.0 && nu2 > 0.0, "binomial Mittag-Leffler orders must be > 0");
}

namespace {

using cd = std::complex<double>;

bool is_nonpositive_integer(long double z) {
    if (z > 0.5L) return false;
    const long double r = std::nearbyint(z);
    return std::fabs(z - r) <= 1e-14L * std::max(1.0L, std::fabs(z));
}

long double rgamma_ld(long double z) {
    if (is_nonpositive_integer(z)) return 0.0L;
    if (z > 1750.0L) return 0.0L;
    return 1.0L / std::tgamma(z);
}

__float128 rgamma_q(__float128 z) {
    if (is_nonpositive_integer(static_cast<long double>(z))) return 0;
    if (z > 1750) return 0;
    return 1 / tgammaq(z);
}

// Partial sums with the error bookkeeping the hybrid evaluator needs.
struct RawSeries {
    long double value = 0;
    long double abs_sum = 0;
    long double err_scale = 0;  // sum_r |term_r| * (r + 5): rounding in the recurrences
    std::size_t terms = 0;
    bool converged = false;
};

RawSeries series_ld(const Ml3Params& p, long double x, std::size_t max_terms) {
    RawSeries out;
    long double coef = 1.0L;  // (lambda)_r x^r / r!
    const long double nu = p.nu, mu = p.mu, lam = p.lambda;
    int small_run = 0;
    for (std::size_t r = 0; r < max_terms; ++r) {
        const long double term = coef * rgamma_ld(mu + nu * static_cast<long double>(r));
        out.value += term;
        out.abs_sum += std::fabs(term);
        out.err_scale += std::fabs(term) * static_cast<long double>(r + 5);
        out.terms = r + 1;
        if (!std::isfinite(static_cast<double>(out.abs_sum))) return out;
        if (std::fabs(term) < 1e-17L * std::fabs(out.value) + 1e-32L * out.abs_sum) {
            if (++small_run >= 2 && static_cast<long double>(r) * nu + mu > 0.0L) {
                out.converged = true;
                return out;
            }
        } else {
            small_run = 0;
        }
        coef *= (lam + static_cast<long double>(r)) * x / static_cast<long double>(r + 1);
        if (coef == 0.0L) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

struct QuadSeries {
    __float128 value = 0;
    __float128 err_scale = 0;
    bool converged = false;
};

QuadSeries series_q(const Ml3Params& p, double x, std::size_t max_terms) {
    QuadSeries out;
    __float128 coef = 1;
    const __float128 nu = p.nu, mu = p.mu, lam = p.lambda, xq = x;
    int small_run = 0;
    for (std::size_t r = 0; r < max_terms; ++r) {
        const __float128 term = coef * rgamma_q(mu + nu * static_cast<__float128>(r));
        out.value += term;
        out.err_scale += fabsq(term) * static_cast<__float128>(r + 5);
        if (fabsq(term) < 1e-36Q * fabsq(out.value) + 1e-66Q * out.err_scale) {
            if (++small_run >= 2 && static_cast<__float128>(r) * nu + mu > 0) {
                out.converged = true;
                return out;
            }
        } else {
            small_run = 0;
        }
        coef *= (lam + static_cast<__float128>(r)) * xq / static_cast<__float128>(r + 1);
        if (coef == 0) {
            out.converged = true;
            return out;
        }
        if (!(fabsq(out.err_scale) < 1e4000Q)) return out;
    }
    return out;
}

bool acceptable(long double value, long double err_scale, long double unit, double rel_target) {
    const long double est = err_scale * unit;
    return est <= static_cast<long double>(rel_target) * std::fabs(value) || err_scale == 0.0L;
}

// Terms of the large-s expansion s^(-mu) sum_r (lambda)_r (-a)^r s^(-nu r) / r!
// that do not decay; they are removed from the image before contour inversion
// and their inverse transforms at t = 1 are added back.
double ml3_talbot(const Ml3Params& p, double a, int nodes) {
    const double nu = p.nu, mu = p.mu, lam = p.lambda;
    std::vector<std::pair<double, double>> removed;  // (exponent mu + nu r, coefficient)
    double coef = 1.0;
    for (int r = 0; mu + nu * r <= 0.0; ++r) {
        removed.emplace_back(mu + nu * r, coef);
        coef *= (lam + r) * (-a) / (r + 1);
    }
    auto image = [&](cd s) {
        const cd ls = std::log(s);
        cd v = std::exp((nu * lam - mu) * ls - lam * std::log(a + std::exp(nu * ls)));
        for (const auto& [e, c] : removed) v -= c * std::exp(-e * ls);
        return v;
    };
    double value = laplace::invert_talbot(image, 1.0, nodes);
    for (const auto& [e, c] : removed) value += c * static_cast<double>(rgamma_ld(e));
    return value;
}

[[noreturn]] void fail(const char* what, const Ml3Params& p, double x) {
    std::ostringstream os;
    os << what << " for E^" << p.lambda << "_{" << p.nu << "," << p.mu << "}(" << x << ")";
    throw NumericalError(os.str());
}

}  // namespace

double rgamma(double z) { return static_cast<double>(rgamma_ld(z)); }

SeriesResult ml3_series(const Ml3Params& p, double x, std::size_t max_terms) {
    p.validate();
    const RawSeries raw = series_ld(p, x, max_terms);
    return {static_cast<double>(raw.value), static_cast<double>(raw.abs_sum), raw.terms, raw.converged};
}

double ml3(const Ml3Params& p, double x, const EvalOptions& opt) {
    p.validate();
    if (!std::isfinite(x)) throw InputError("Mittag-Leffler argument must be finite");
    if (x == 0.0) return rgamma(p.mu);

    constexpr long double eps_ld = std::numeric_limits<long double>::epsilon();
    const bool invertible = x < 0.0 && p.nu <= 1.0;

    if (p.nu == 1.0 && x < 0.0 && x < -1.0) {
        // Kummer: 1F1(l; m; x) = e^x 1F1(m - l; m; -x); the series on the
        // right has no cancellation when m - l >= 0.
        const RawSeries k = series_ld({1.0, p.mu, p.mu - p.lambda}, -static_cast<long double>(x), opt.max_terms);
        const long double scale = std::exp(static_cast<long double>(x));
        if (k.converged && acceptable(k.value, k.err_scale, eps_ld, opt.rel_target))
            return static_cast<double>(scale * k.value);
    }

    // For small nu the terms hardly decay until |x|^k does the work.
    const double series_abs = p.nu < 0.25 ? std::min(opt.switch_abs, 0.5) : opt.switch_abs;
    const bool near = std::fabs(x) <= series_abs;
    if (near || !invertible) {
        const RawSeries s = series_ld(p, x, opt.max_terms);
        if (s.converged && acceptable(s.value, s.err_scale, eps_ld, opt.rel_target))
            return static_cast<double>(s.value);
        // Heavy cancellation (large lambda, or mu near a pole): the contour
        // only delivers absolute accuracy, so try quad precision first.
        const QuadSeries q = series_q(p, x, opt.max_terms);
        if (q.converged && q.err_scale * 1e-34Q <= static_cast<__float128>(opt.rel_target) * fabsq(q.value))
            return static_cast<double>(q.value);
    }
    if (invertible) return ml3_talbot(p, -x, opt.talbot_nodes);
    fail("series did not reach the accuracy target", p, x);
}

double prabhakar(const Ml3Params& p, double a, double t, const EvalOptions& opt) {
    detail::require(t > 0.0 && std::isfinite(t), "prabhakar needs t > 0");
    detail::require(a >= 0.0 && std::isfinite(a), "prabhakar needs a >= 0");
    return std::pow(t, p.mu - 1.0) * ml3(p, -a * std::pow(t, p.nu), opt);
}

double ml3_deriv(const Ml3Params& p, double a, int n, double x, const EvalOptions& opt) {
    detail::require(n >= 0, "derivative order must be >= 0");
    detail::require(x > 0.0 && std::isfinite(x), "ml3_deriv needs x > 0");
    const Ml3Params shifted{p.nu, p.mu - n, p.lambda};
    return std::pow(x, p.mu - 1.0 - n) * ml3(shifted, a * std::pow(x, p.nu), opt);
}

SeriesResult ml_binom_series(const Ml2Params& p, double x1, double x2, Rearrangement which,
                             const EvalOptions& opt) {
    p.validate();
    double outer_x = x1, inner_x = x2, outer_nu = p.nu1, inner_nu = p.nu2;
    if (which == Rearrangement::outer_second) {
        std::swap(outer_x, inner_x);
        std::swap(outer_nu, inner_nu);
    }
    SeriesResult out;
    double power = 1.0;
    int small_run = 0;
    const std::size_t cap = std::min<std::size_t>(opt.max_terms, 5000);
    for (std::size_t r = 0; r < cap; ++r) {
        const double rr = static_cast<double>(r);
        const double inner = ml3({inner_nu, outer_nu * rr + p.mu, 1.0 + rr}, inner_x, opt);
        const double term = power * inner;
        out.value += term;
        out.abs_sum += std::abs(term);
        out.terms = r + 1;
        if (std::abs(term) < 1e-17 * std::abs(out.value) + 1e-32 * out.abs_sum && outer_nu * rr + p.mu > 0.0) {
            if (++small_run >= 2) {
                out.converged = true;
                return out;
            }
        } else {
            small_run = 0;
        }
        power *= outer_x;
        if (power == 0.0) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

namespace {

double ml_binom_talbot(const Ml2Params& p, double x1, double x2, int nodes) {
    // Non-decaying terms s^(-(mu + nu1 l1 + nu2 l2)) of the expansion at infinity.
    struct Term {
        double exponent, coef;
    };
    std::vector<Term> removed;
    for (int l1 = 0; p.mu + p.nu1 * l1 <= 0.0; ++l1) {
        for (int l2 = 0; p.mu + p.nu1 * l1 + p.nu2 * l2 <= 0.0; ++l2) {
            const double binom = std::tgamma(l1 + l2 + 1.0) / (std::tgamma(l1 + 1.0) * std::tgamma(l2 + 1.0));
            removed.push_back({p.mu + p.nu1 * l1 + p.nu2 * l2, binom * std::pow(x1, l1) * std::pow(x2, l2)});
        }
    }
    auto image = [&](cd s) {
        const cd ls = std::log(s);
        cd v = std::exp(-p.mu * ls) / (1.0 - x1 * std::exp(-p.nu1 * ls) - x2 * std::exp(-p.nu2 * ls));
        for (const auto& t : removed) v -= t.coef * std::exp(-t.exponent * ls);
        return v;
    };
    double value = laplace::invert_talbot(image, 1.0, nodes);
    for (const auto& t : removed) value += t.coef * rgamma(t.exponent);
    return value;
}

}  // namespace

double ml_binom(const Ml2Params& p, double x1, double x2, const EvalOptions& opt) {
    p.validate();
    if (!std::isfinite(x1) || !std::isfinite(x2)) throw InputError("binomial Mittag-Leffler arguments must be finite");
    if (x1 == 0.0) return ml3({p.nu2, p.mu, 1.0}, x2, opt);
    if (x2 == 0.0) return ml3({p.nu1, p.mu, 1.0}, x1, opt);

    const bool invertible = x1 <= 0.0 && x2 <= 0.0 && p.nu1 <= 1.0 && p.nu2 <= 1.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double series_abs =
        std::min(p.nu1, p.nu2) < 0.25 ? std::min(opt.binom_switch_abs, 0.25) : opt.binom_switch_abs;
    if (std::abs(x1) + std::abs(x2) <= series_abs || !invertible) {
        const SeriesResult s = ml_binom_series(p, x1, x2, Rearrangement::outer_first, opt);
        const double est = s.abs_sum * eps * static_cast<double>(s.terms + 5);
        if (s.converged && est <= 1e-12 * std::abs(s.value)) return s.value;
        if (!invertible) {
            if (s.converged && est <= 1e-8 * std::abs(s.value)) return s.value;
            std::ostringstream os;
            os << "binomial Mittag-Leffler series lost accuracy at (" << x1 << ", " << x2 << ")";
            throw NumericalError(os.str());
        }
    }
    return ml_binom_talbot(p, x1, x2, opt.talbot_nodes);
}

}  // namespace relaxkit::mlf
