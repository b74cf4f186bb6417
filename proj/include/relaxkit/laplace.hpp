#pragma once

#include <complex>
#include <functional>

#include "relaxkit/generalized_function.hpp"

namespace relaxkit::laplace {

enum class InvertMethod { gaver_stehfest, talbot };

struct TransformSettings {
    double forward_rel_tol = 1e-8;
    InvertMethod invert_method = InvertMethod::gaver_stehfest;
    int gs_terms = 16;      // even, >= 8
    int talbot_nodes = 32;  // >= 16

    void validate() const;
};

using RealImage = std::function<double(double)>;
using ComplexImage = std::function<std::complex<double>(std::complex<double>)>;

/// An s-domain function to be inverted. Gaver-Stehfest needs only `real`;
/// Talbot needs `complex`. When only `complex` is given the real-axis values
/// are taken from it.
struct Image {
    RealImage real;
    ComplexImage complex;
};

/// delta_weight + integral_0^inf exp(-s t) f.regular(t) dt.
///
/// The integral is split at eps = min(0.1/s, 0.1). On [0, eps] the declared
/// leading term c t^(g-1)/Gamma(g) is integrated in closed form through the
/// regularized lower incomplete gamma function and the remainder by
/// tanh-sinh quadrature; [eps, inf) is covered by doubling panels of
/// adaptive Gauss-Kronrod until the exponential factor has killed the tail.
/// Throws NumericalError when the tail does not decay.
double forward(const GeneralizedFunction& f, double s, const TransformSettings& cfg = {});

/// Numerical inverse Laplace transform at t > 0 using cfg.invert_method.
double invert(const Image& F, double t, const TransformSettings& cfg = {});

/// Gaver-Stehfest with `terms` (even) real samples. Compares against the
/// (terms - 2) estimate and throws NumericalError when the two disagree by
/// more than `consistency_tol` (relative to max(|f|, 1e-3 * scale)).
double invert_gaver_stehfest(const RealImage& F, double t, int terms = 16, double consistency_tol = 1e-2);

/// Fixed Talbot contour (Abate-Valko) with `nodes` complex samples.
double invert_talbot(const ComplexImage& F, double t, int nodes = 32);

}  // namespace relaxkit::laplace
