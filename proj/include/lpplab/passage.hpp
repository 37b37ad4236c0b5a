#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/region.hpp"
#include "lpplab/weight_field.hpp"

namespace lpplab {

/// An up-right lattice path together with its passage time (sum of weights
/// over all vertices except the final one).
struct GeodesicPath {
    std::vector<Point> vertices;
    double passage_time = 0.0;

    Point start() const { return vertices.front(); }
    Point end() const { return vertices.back(); }
};

namespace detail {
/// Coarse working-memory accounting for the passage kernels, in doubles.
/// Tracks the live total and its high-water mark.
void alloc_acquire(std::size_t doubles) noexcept;
void alloc_release(std::size_t doubles) noexcept;
void alloc_reset() noexcept;
long long alloc_peak_doubles() noexcept;
}  // namespace detail

/// Maximum passage time over up-right paths from u to v. Frontier dynamic
/// program sweeping antidiagonals; working memory O(box width). Endpoint
/// convention: weight of u included, weight of v excluded; T(u,u) = 0.
double last_passage_time(const WeightField& field, Point u, Point v);

/// The maximizing path, reconstructed with O(box width) working memory by
/// recursive midline splitting. Where two predecessors tie exactly, the step
/// from below (x, y-1) is preferred.
GeodesicPath geodesic(const WeightField& field, Point u, Point v);

/// Maximum passage time over up-right paths from u to v all of whose
/// vertices lie in `region`; nullopt if no such path exists.
std::optional<std::pair<double, GeodesicPath>> constrained_passage(const WeightField& field,
                                                                   Point u, Point v,
                                                                   const Region& region);

/// Passage with weights inside R discounted to zero; the maximizer and the
/// discounted time. Ties created by the zeros follow the geodesic tie-break.
std::pair<double, GeodesicPath> discounted_passage(const WeightField& field, Point u, Point v,
                                                   const Region& discount);

/// Exhaustive enumeration oracle for small boxes (#paths <= 10^6). Same
/// endpoint and tie-break conventions as the dynamic programs.
std::optional<std::pair<double, GeodesicPath>> brute_force_passage(
    const WeightField& field, Point u, Point v, const std::optional<Region>& region = {},
    const std::optional<Region>& discount = {});

/// Number of up-right paths C(dphi, dx), saturating at 2^62.
std::uint64_t path_count(Point u, Point v);

}  // namespace lpplab
