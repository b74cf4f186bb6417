#pragma once

#include <string>
#include <vector>

#include "relaxkit/analysis.hpp"
#include "relaxkit/generalized_function.hpp"
#include "relaxkit/models.hpp"

namespace relaxkit::evolution {

enum class Scheme { product_trapezoid, convolution_quadrature_order1, convolution_quadrature_order2 };

std::string to_string(Scheme s);
/// Accepts pt, cq1, cq2 and the full enumerator names.
Scheme parse_scheme(const std::string& name);

/// Marching solvers need a uniform grid starting at t = 0.
struct SolverSettings {
    Grid grid = Grid::uniform(0.0, 5.0, 2048);
    Scheme scheme = Scheme::product_trapezoid;
    double tol = 1e-8;  // relative defect allowed in the discrete equation

    void validate() const;
};

/// Solver output on the grid: the regular part of phi at every node (the
/// entry at t = 0 is the first-cell average when phi is singular there),
/// the relaxation function n at every node, and the delta weight of phi.
struct Solution {
    Grid grid;
    std::vector<double> values;
    std::vector<double> relaxation;
    double delta_weight = 0.0;
    double residual_estimate = 0.0;  // max defect of the discrete equation
    Scheme scheme = Scheme::product_trapezoid;
};

/// phi = B M - B (M * phi). With a bounded, delta-free M the equation is
/// marched for phi directly; otherwise it is integrated once into
/// n + B (M * n) = 1 and phi = -n' is recovered by five-point differences.
Solution solve_integral_eq(const GeneralizedFunction& M, double B, const SolverSettings& cfg);

/// d/dt (k * phi) = -B phi. Marched in the integrated form
/// (k + B) * m = B t for m = 1 - n (m(0) = 0 is the initial datum), or as
/// d phi + (k_reg + B) * phi = B when k carries a delta of weight d > 0.
Solution solve_integrodiff_eq(const GeneralizedFunction& k, double B, const SolverSettings& cfg);

/// Riemann-Liouville fractional integral of samples on a uniform grid from
/// 0, product-trapezoid weights (exact for piecewise-linear f).
std::vector<double> frac_integral(const std::vector<double>& f, const Grid& grid, double alpha);

/// d/dt I^(1-alpha) f with second-order differences (one-sided at the ends;
/// the entry at t = 0 is not meaningful when f(0) != 0).
std::vector<double> frac_deriv_rl(const std::vector<double>& f, const Grid& grid, double alpha);

/// I^(1-alpha) f' with f piecewise linear (the L1 scheme).
std::vector<double> frac_deriv_caputo(const std::vector<double>& f, const Grid& grid, double alpha);

/// Solves with M and with k on cfg.grid and reports the largest relative
/// difference of the two responses over nodes t >= t_from.
analysis::PropertyReport verify_equivalence(const RelaxationModel& m, const SolverSettings& cfg, double t_from,
                                            double tolerance = 1e-3);

/// Residual of n + tau1 n' + tau2^alpha D^alpha_RL n = 0 (the excess-wing
/// equation; tau1 = tau2 = 1 gives -n = D^alpha n + n') at the nodes of the
/// uniform grid with t >= t_from, relative to |n| + |tau1 n'| + |tau2^a D n|.
analysis::PropertyReport ew_equation_residual(const RelaxationModel& m, const Grid& grid, double t_from,
                                              double tolerance = 1e-3);
/// Same with caller-supplied samples of n (negative controls).
analysis::PropertyReport ew_equation_residual(const RelaxationModel& m, const Grid& grid,
                                              const std::vector<double>& n, double t_from, double tolerance = 1e-3);

/// Checks int_0^t K(t - x) phi(x) dx = K(t) - t^(-ab)/Gamma(1 - ab) with
/// K(u) = u^(-ab) E^{-b}_{a,1-ab}[-(u/tau)^a] and phi the JWS response.
/// phi dx is written as -dn with n piecewise linear on `steps` uniform cells
/// of [0, t], the cell integrals of K being computed accurately, so the
/// residual falls like steps^-(1+alpha) until it reaches rounding level.
analysis::PropertyReport jws_convolution_identity(const RelaxationModel& m, const Grid& t_grid, int steps = 4096,
                                                  double tolerance = 1e-4);

}  // namespace relaxkit::evolution
