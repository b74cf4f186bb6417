#pragma once

#include "relaxkit/generalized_function.hpp"
#include "relaxkit/models.hpp"

namespace relaxkit::timedomain {

/// Response function phi(t). Its Laplace transform is the spectral function.
/// For JWS and EW the delta term printed next to the closed form cancels
/// against the r = 0 term of the series (t^-1 / Gamma(0) is a delta), so the
/// net delta weight is 0 for every model.
GeneralizedFunction response(const RelaxationModel& m);
PointValue response(const RelaxationModel& m, double t);

/// Relaxation function n(t), t >= 0, with n(0) = 1.
double relaxation(const RelaxationModel& m, double t);
/// Same as a GeneralizedFunction (bounded, no delta) carrying (1 - phi^)/s.
GeneralizedFunction relaxation_function(const RelaxationModel& m);

/// Memory kernel M with transform 1/Psi(s).
GeneralizedFunction kernel_M(const RelaxationModel& m);
PointValue kernel_M(const RelaxationModel& m, double t);

/// Memory kernel k with transform Psi(s)/s. Debye is a pure delta of
/// weight B tau; JWS with alpha = 1 has delta weight B tau / beta.
GeneralizedFunction kernel_k(const RelaxationModel& m);
PointValue kernel_k(const RelaxationModel& m, double t);

/// Sum of the HN memory-kernel series
///   (Bt)^-1 sum_r (t/tau)^(ab(r+1)) E^{b(r+1)}_{a,ab(r+1)}[-(t/tau)^a],
/// truncated once a term drops below 1e-14 of the sum (at most 500 terms).
/// Throws NumericalError when it does not settle. Exposed for testing; the
/// kernel uses it for t <= 0.01 tau and Talbot inversion of 1/Psi beyond.
double hn_memory_series(const RelaxationModel& m, double t);

}  // namespace relaxkit::timedomain
