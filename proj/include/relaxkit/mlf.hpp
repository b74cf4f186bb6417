#pragma once

#include <cstddef>

namespace relaxkit::mlf {

/// Parameters (nu, mu, lambda) of the three-parameter (Prabhakar)
/// Mittag-Leffler function
///   E^lambda_{nu,mu}(x) = sum_r (lambda)_r x^r / (r! Gamma(mu + nu r)).
/// nu > 0; mu and lambda are any finite reals. The rising factorial is
/// formed as a product, so negative lambda gives a polynomial when lambda is
/// a non-positive integer, and 1/Gamma vanishes at non-positive integers.
struct Ml3Params {
    double nu = 1.0;
    double mu = 1.0;
    double lambda = 1.0;

    void validate() const;
};

/// Parameters of the binomial Mittag-Leffler function E_{(nu1,nu2),mu}.
struct Ml2Params {
    double nu1 = 1.0;
    double nu2 = 1.0;
    double mu = 1.0;

    void validate() const;
};

/// Knobs for the hybrid evaluator. The defaults are what every other module
/// uses.
struct EvalOptions {
    double switch_abs = 5.0;     // |x| above this goes to transform inversion when admissible
    double binom_switch_abs = 2.0;  // same for |x1| + |x2|; the inner terms lose digits sooner
    double rel_target = 1e-13;   // accepted estimated relative rounding error of a series sum
    std::size_t max_terms = 100000;
    int talbot_nodes = 24;
};

/// Outcome of a truncated series evaluation.
struct SeriesResult {
    double value = 0.0;
    double abs_sum = 0.0;      // sum of |terms|, the cancellation scale
    std::size_t terms = 0;
    bool converged = false;
};

/// 1/Gamma(z) with 1/Gamma(non-positive integer) = 0.
double rgamma(double z);

/// Truncated series in extended precision: stops when two consecutive terms
/// fall below 1e-17 |partial sum| (or far below the rounding scale of the
/// absolute sum), capped at max_terms.
SeriesResult ml3_series(const Ml3Params& p, double x, std::size_t max_terms = 100000);

/// E^lambda_{nu,mu}(x). Series for |x| <= switch_abs (0.5 when nu < 0.25)
/// when its cancellation estimate is acceptable, retried in quad precision;
/// for larger negative arguments (0 < nu <= 1) the Prabhakar Laplace pair
/// s^(nu lambda - mu) (a + s^nu)^(-lambda) is inverted on a Talbot contour.
/// nu == 1 with x < 0 uses Kummer's transformation.
/// Throws NumericalError rather than return an unreliable value.
double ml3(const Ml3Params& p, double x, const EvalOptions& opt = {});

/// Prabhakar function t^(mu-1) E^lambda_{nu,mu}(-a t^nu) for t > 0, a >= 0.
double prabhakar(const Ml3Params& p, double a, double t, const EvalOptions& opt = {});

/// n-th derivative of x^(mu-1) E^lambda_{nu,mu}(a x^nu) at x > 0, evaluated as
/// x^(mu-1-n) E^lambda_{nu,mu-n}(a x^nu).
double ml3_deriv(const Ml3Params& p, double a, int n, double x, const EvalOptions& opt = {});

enum class Rearrangement {
    outer_first,   // sum_r x1^r E^{1+r}_{nu2, nu1 r + mu}(x2)
    outer_second,  // sum_r x2^r E^{1+r}_{nu1, nu2 r + mu}(x1)
};

/// Binomial series through one of the two single-series rearrangements.
SeriesResult ml_binom_series(const Ml2Params& p, double x1, double x2, Rearrangement which,
                             const EvalOptions& opt = {});

/// E_{(nu1,nu2),mu}(x1, x2). Uses the first rearrangement for |x1| + |x2| <=
/// binom_switch_abs (0.25 when an order is below 0.25) and, for non-positive
/// arguments with nu1, nu2 <= 1, Talbot inversion of
/// s^(-mu) / (1 - x1 s^(-nu1) - x2 s^(-nu2)) otherwise.
double ml_binom(const Ml2Params& p, double x1, double x2, const EvalOptions& opt = {});

}  // namespace relaxkit::mlf
