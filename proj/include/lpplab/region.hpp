#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>

#include "lpplab/lattice.hpp"

namespace lpplab {

/// Inclusive psi-interval of a region's slice at fixed phi. lo > hi means empty.
struct PsiInterval {
    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();

    bool empty() const noexcept { return lo > hi; }

    static PsiInterval none() noexcept { return {1, 0}; }
    static PsiInterval all() noexcept { return {}; }

    PsiInterval clipped(PsiInterval other) const noexcept {
        return {std::max(lo, other.lo), std::min(hi, other.hi)};
    }
};

/// An immutable O(1)-membership predicate on lattice points.
///
/// Rectangles are axis-rotated: an inclusive phi-interval times an inclusive
/// psi-interval. Half-plane bands bound psi from above on a phi slab
/// [0, phi_max]. Complement and intersection build the remaining shapes used
/// by the audits (notably R minus a single vertex).
class Region {
public:
    static Region empty();
    static Region whole_plane();
    static Region rectangle(std::int64_t phi_lo, std::int64_t phi_hi, std::int64_t psi_lo,
                            std::int64_t psi_hi);
    static Region half_plane_band(std::int64_t psi_max, std::int64_t phi_max);
    static Region single_point(Point p);
    static Region complement(Region inner);
    static Region intersect(Region a, Region b);

    bool contains(Point p) const;

    /// Exact psi-bounds of the slice at phi when the shape supports them;
    /// nullopt means "not representable, fall back to contains()".
    std::optional<PsiInterval> psi_interval(std::int64_t ph) const;

    std::int64_t phi_lo() const;  // only meaningful for rectangles
    std::int64_t phi_hi() const;
    std::int64_t psi_lo() const;
    std::int64_t psi_hi() const;

private:
    enum class Kind { Empty, WholePlane, Rectangle, HalfPlaneBand, Complement, Intersection };

    Kind kind_ = Kind::Empty;
    std::int64_t a_ = 0, b_ = 0, c_ = 0, d_ = 0;  // rectangle: phi_lo/hi, psi_lo/hi; band: psi_max, phi_max
    std::shared_ptr<const Region> left_, right_;
};

}  // namespace lpplab
