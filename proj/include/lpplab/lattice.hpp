#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace lpplab {

/// Raised when an operation's input is outside its domain (maps to CLI exit 2).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A vertex of the integer lattice.
struct Point {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Position along the diagonal: phi(p) = x + y.
constexpr std::int64_t phi(Point p) noexcept { return p.x + p.y; }

/// Signed distance from the diagonal: psi(p) = y - x.
constexpr std::int64_t psi(Point p) noexcept { return p.y - p.x; }

/// Inverse of the (phi, psi) chart. Requires phi and psi of equal parity.
constexpr Point from_phi_psi(std::int64_t ph, std::int64_t ps) noexcept {
    return Point{(ph - ps) / 2, (ph + ps) / 2};
}

/// Componentwise partial order: u precedes v iff u.x <= v.x and u.y <= v.y.
constexpr bool leq(Point u, Point v) noexcept { return u.x <= v.x && u.y <= v.y; }

inline constexpr std::int64_t kPhiGuard = std::int64_t{1} << 40;

/// Coordinate overflow guard: |phi| and |psi| must stay below 2^40.
inline void require_in_range(Point p) {
    if (phi(p) > kPhiGuard || phi(p) < -kPhiGuard || psi(p) > kPhiGuard || psi(p) < -kPhiGuard) {
        throw DomainError("lattice point outside the 2^40 coordinate guard at (" +
                          std::to_string(p.x) + "," + std::to_string(p.y) + ")");
    }
}

inline void require_ordered(Point u, Point v) {
    if (!leq(u, v)) {
        throw DomainError("endpoints not coordinatewise ordered: (" + std::to_string(u.x) + "," +
                          std::to_string(u.y) + ") !<= (" + std::to_string(v.x) + "," +
                          std::to_string(v.y) + ")");
    }
}

struct PointHash {
    std::size_t operator()(Point p) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(p.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace lpplab
