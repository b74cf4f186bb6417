#include "relaxkit/generalized_function.hpp"

#include <cmath>

#include "relaxkit/error.hpp"

namespace relaxkit {

Grid::Grid(std::vector<double> nodes, GridScheme scheme) : nodes_(std::move(nodes)), scheme_(scheme) {
    detail::require(nodes_.size() >= 2, "grid needs at least two nodes");
    detail::require(nodes_.front() >= 0.0, "grid must start at t >= 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        detail::require(nodes_[i] > nodes_[i - 1], "grid nodes must be strictly increasing");
}

Grid Grid::uniform(double start, double stop, std::size_t intervals) {
    detail::require(intervals >= 1, "uniform grid needs at least one interval");
    detail::require(std::isfinite(start) && std::isfinite(stop) && stop > start, "uniform grid needs start < stop");
    std::vector<double> v(intervals + 1);
    const double h = (stop - start) / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) v[i] = start + h * static_cast<double>(i);
    v.back() = stop;
    return Grid(std::move(v), GridScheme::uniform);
}

Grid Grid::logarithmic(double start, double stop, std::size_t nodes) {
    detail::require(nodes >= 2, "logarithmic grid needs at least two nodes");
    detail::require(start > 0.0 && stop > start && std::isfinite(stop), "logarithmic grid needs 0 < start < stop");
    std::vector<double> v(nodes);
    const double a = std::log(start), b = std::log(stop);
    for (std::size_t i = 0; i < nodes; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(nodes - 1));
    v.front() = start;
    v.back() = stop;
    return Grid(std::move(v), GridScheme::logarithmic);
}

double Grid::step() const {
    if (scheme_ != GridScheme::uniform) throw InputError("step() requires a uniform grid");
    return (nodes_.back() - nodes_.front()) / static_cast<double>(nodes_.size() - 1);
}

}  // namespace relaxkit
