#pragma once

#include "lpplab/lattice.hpp"
#include "lpplab/passage.hpp"

namespace lpplab {

/// Deterministic centering (sqrt(dx) + sqrt(dy))^2 for u <= v, else 0.
double f_expected(Point u, Point v);

/// Max |psi| over the path's vertices with 0 <= phi <= 2r. The path must
/// start at the origin.
std::int64_t transversal_fluctuation(const GeodesicPath& path, std::int64_t r);

/// The unique path vertex on the line x + y = T.
Point crossing_point(const GeodesicPath& path, std::int64_t line_phi);

/// (time - f_expected(u, v)) / (phi(v) - phi(u))^(1/3).
double temporal_deviation(double time, Point u, Point v);

/// True iff the two paths (same start) share exactly a common prefix: once
/// they separate they never meet again.
bool common_prefix_check(const GeodesicPath& p1, const GeodesicPath& p2);

/// True iff psi(low) <= psi(high) at every integer line in [phi_lo, phi_hi];
/// both paths must cover the range.
bool ordering_check(const GeodesicPath& low, const GeodesicPath& high, std::int64_t phi_lo,
                    std::int64_t phi_hi);

}  // namespace lpplab
