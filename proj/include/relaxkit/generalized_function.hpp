#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace relaxkit {

/// A causal time-domain object split into
///   delta_weight * delta(t) + regular(t),  t > 0,
/// where the regular part is integrable at the origin and behaves like
///   sing_coefficient * t^(sing_exponent - 1) / Gamma(sing_exponent)
/// as t -> 0+. sing_exponent == 1 means the regular part is bounded.
///
/// `transform`, when present, is the closed-form Laplace transform of the
/// whole object (delta included), valid on the cut plane C \ (-inf, 0].
struct GeneralizedFunction {
    double delta_weight = 0.0;
    double sing_exponent = 1.0;
    double sing_coefficient = 0.0;
    std::function<double(double)> regular;
    std::function<std::complex<double>(std::complex<double>)> transform;

    double operator()(double t) const { return regular ? regular(t) : 0.0; }
    bool has_transform() const { return static_cast<bool>(transform); }
};

/// Value of a generalized function at t > 0 together with its delta weight.
struct PointValue {
    double regular = 0.0;
    double delta_weight = 0.0;
};

enum class GridScheme { uniform, logarithmic };

/// Ordered sample nodes. Invariants: at least two nodes, strictly increasing,
/// first node >= 0, and a logarithmic grid starts strictly above 0.
class Grid {
public:
    static Grid uniform(double start, double stop, std::size_t intervals);
    static Grid logarithmic(double start, double stop, std::size_t nodes);

    const std::vector<double>& nodes() const { return nodes_; }
    GridScheme scheme() const { return scheme_; }
    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }
    /// Step of a uniform grid (throws for logarithmic grids).
    double step() const;

private:
    Grid(std::vector<double> nodes, GridScheme scheme);
    std::vector<double> nodes_;
    GridScheme scheme_;
};

}  // namespace relaxkit
