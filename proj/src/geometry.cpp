#include "lpplab/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <unordered_set>

namespace lpplab {

double f_expected(Point u, Point v) {
    if (!leq(u, v)) return 0.0;
    const double s = std::sqrt(static_cast<double>(v.x - u.x)) +
                     std::sqrt(static_cast<double>(v.y - u.y));
    return s * s;
}

std::int64_t transversal_fluctuation(const GeodesicPath& path, std::int64_t r) {
    if (path.vertices.empty() || !(path.start() == Point{0, 0})) {
        throw DomainError("transversal fluctuation requires a path starting at the origin");
    }
    if (r < 1) throw DomainError("transversal fluctuation requires r >= 1");
    const std::int64_t last =
        std::min<std::int64_t>(2 * r, static_cast<std::int64_t>(path.vertices.size()) - 1);
    std::int64_t best = 0;
    for (std::int64_t i = 0; i <= last; ++i) {
        best = std::max(best, std::abs(psi(path.vertices[static_cast<std::size_t>(i)])));
    }
    return best;
}

Point crossing_point(const GeodesicPath& path, std::int64_t line_phi) {
    if (path.vertices.empty() || line_phi < phi(path.start()) || line_phi > phi(path.end())) {
        throw DomainError("line phi outside the path's range");
    }
    const Point p = path.vertices[static_cast<std::size_t>(line_phi - phi(path.start()))];
    if (phi(p) != line_phi) throw DomainError("path violates the one-step-per-line invariant");
    return p;
}

double temporal_deviation(double time, Point u, Point v) {
    require_ordered(u, v);
    const std::int64_t dphi = phi(v) - phi(u);
    if (dphi < 1) throw DomainError("temporal deviation requires phi(v) - phi(u) >= 1");
    return (time - f_expected(u, v)) / std::cbrt(static_cast<double>(dphi));
}

bool common_prefix_check(const GeodesicPath& p1, const GeodesicPath& p2) {
    if (p1.vertices.empty() || p2.vertices.empty() || !(p1.start() == p2.start())) {
        throw DomainError("common prefix check requires a shared start vertex");
    }
    const std::size_t min_len = std::min(p1.vertices.size(), p2.vertices.size());
    std::size_t split = 0;
    while (split < min_len && p1.vertices[split] == p2.vertices[split]) ++split;
    if (split == min_len) return true;  // one is a prefix of the other
    std::unordered_set<Point, PointHash> tail(p1.vertices.begin() + static_cast<long>(split),
                                              p1.vertices.end());
    for (std::size_t i = split; i < p2.vertices.size(); ++i) {
        if (tail.count(p2.vertices[i])) return false;
    }
    return true;
}

bool ordering_check(const GeodesicPath& low, const GeodesicPath& high, std::int64_t phi_lo,
                    std::int64_t phi_hi) {
    if (phi_lo > phi_hi) throw DomainError("ordering check requires phi_lo <= phi_hi");
    for (const GeodesicPath* p : {&low, &high}) {
        if (p->vertices.empty() || phi(p->start()) > phi_lo || phi(p->end()) < phi_hi) {
            throw DomainError("ordering check requires both paths to cover the phi range");
        }
    }
    for (std::int64_t t = phi_lo; t <= phi_hi; ++t) {
        if (psi(crossing_point(low, t)) > psi(crossing_point(high, t))) return false;
    }
    return true;
}

}  // namespace lpplab
