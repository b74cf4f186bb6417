#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relaxkit/generalized_function.hpp"
#include "relaxkit/models.hpp"

namespace relaxkit::analysis {

enum class Property { CMF, SF, CBF, SonineUnit, MonotoneDecreasing, Nonnegative, UrlSlope, DerivativeRelation };

std::string to_string(Property p);

struct Witness {
    double location = 0.0;
    double value = 0.0;
};

/// Outcome of one sampled property check. `pass` iff max_violation <= tolerance.
struct PropertyReport {
    Property property = Property::CMF;
    std::string grid;  // human-readable description of the sample points
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::vector<Witness> witnesses;  // at most 16, worst first
};

void to_json(nlohmann::json& j, const PropertyReport& r);

using RealFunction = std::function<double(double)>;

/// Default s-grid for the sampled checks: 41 log-spaced nodes on [1e-4, 1e4].
Grid default_s_grid();

struct DerivativeCheckOptions {
    int max_order = 4;        // in [2, 8]
    double tolerance = 1e-6;  // on the scaled violation
};

/// Sampled complete monotonicity: (-1)^n F^(n)(s) >= 0 for n = 0..max_order
/// at every node. Derivatives come from Richardson-extrapolated central
/// differences with steps s 1e-2 2^-j; the violation at order n is measured
/// in units of n! |F(s)| / s^n. A falsifier, not a proof.
PropertyReport check_cmf(const RealFunction& F, const Grid& s_grid, const DerivativeCheckOptions& opt = {});

/// Sampled complete Bernstein property: F >= 0 and (-1)^(n-1) F^(n) >= 0 for
/// n = 1..max_order.
PropertyReport check_cbf(const RealFunction& F, const Grid& s_grid, const DerivativeCheckOptions& opt = {});

/// Sampled Stieltjes property: F passes check_cmf and 1/F passes check_cbf.
PropertyReport check_stieltjes(const RealFunction& F, const Grid& s_grid, const DerivativeCheckOptions& opt = {});

/// (f * g)(t) = int_0^t f(u) g(t-u) du for t > 0, delta terms included
/// algebraically (a delta-delta product is a delta at 0 and does not
/// contribute for t > 0).
///
/// The regular integral is split at t/2; on each half the factor that may
/// be singular at its own origin is integrated after the substitution
/// u = (t/2) w^(1/gamma), which removes the declared u^(gamma-1) behaviour.
/// In w, `panels` uniform 20-point Gauss-Legendre panels are used, the first
/// one refined geometrically towards 0.
double convolve(const GeneralizedFunction& f, const GeneralizedFunction& g, double t, int panels);

/// convolve() with the panel count doubled from 4 until two successive
/// values agree to `rel_tol`. Throws NumericalError after 2048 panels.
double convolve_adaptive(const GeneralizedFunction& f, const GeneralizedFunction& g, double t,
                         double rel_tol = 1e-10);

/// max over the grid of |(k * M)(t) - 1|. The grid must start above 0.
PropertyReport sonine_residual(const GeneralizedFunction& M, const GeneralizedFunction& k, const Grid& t_grid,
                               double tolerance = 1e-4);

enum class UrlEnd { zero, infinity };

/// Least-squares log-log slope of phi^(s) on [1e3, 1e6]/tau (infinity) or of
/// 1 - phi^(s) on [1e-6, 1e-3]/tau (zero). Rejects the excess wing.
double url_slope(const RelaxationModel& m, UrlEnd end);

/// max over the nodes of |phi(t) + n'(t)| / max(|phi(t)|, 1e-3 max|phi|),
/// n' by Richardson-extrapolated central differences.
PropertyReport check_response_relaxation(const RelaxationModel& m, const Grid& t_grid, double tolerance = 1e-5);

/// f(t_i) >= -tolerance at every node.
PropertyReport check_nonnegative(const RealFunction& f, const Grid& grid, double tolerance = 1e-12);

/// f(t_{i+1}) <= f(t_i) + tolerance for consecutive nodes.
PropertyReport check_monotone_decreasing(const RealFunction& f, const Grid& grid, double tolerance = 1e-12);

}  // namespace relaxkit::analysis
