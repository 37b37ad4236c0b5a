#include "lpplab/region.hpp"

namespace lpplab {

Region Region::empty() {
    Region r;
    r.kind_ = Kind::Empty;
    return r;
}

Region Region::whole_plane() {
    Region r;
    r.kind_ = Kind::WholePlane;
    return r;
}

Region Region::rectangle(std::int64_t phi_lo, std::int64_t phi_hi, std::int64_t psi_lo,
                         std::int64_t psi_hi) {
    if (phi_lo > phi_hi || psi_lo > psi_hi) {
        throw DomainError("rectangle bounds must be nonempty intervals");
    }
    Region r;
    r.kind_ = Kind::Rectangle;
    r.a_ = phi_lo;
    r.b_ = phi_hi;
    r.c_ = psi_lo;
    r.d_ = psi_hi;
    return r;
}

Region Region::half_plane_band(std::int64_t psi_max, std::int64_t phi_max) {
    Region r;
    r.kind_ = Kind::HalfPlaneBand;
    r.a_ = psi_max;
    r.b_ = phi_max;
    return r;
}

Region Region::single_point(Point p) { return rectangle(phi(p), phi(p), psi(p), psi(p)); }

Region Region::complement(Region inner) {
    Region r;
    r.kind_ = Kind::Complement;
    r.left_ = std::make_shared<Region>(std::move(inner));
    return r;
}

Region Region::intersect(Region a, Region b) {
    Region r;
    r.kind_ = Kind::Intersection;
    r.left_ = std::make_shared<Region>(std::move(a));
    r.right_ = std::make_shared<Region>(std::move(b));
    return r;
}

bool Region::contains(Point p) const {
    switch (kind_) {
        case Kind::Empty:
            return false;
        case Kind::WholePlane:
            return true;
        case Kind::Rectangle:
            return phi(p) >= a_ && phi(p) <= b_ && psi(p) >= c_ && psi(p) <= d_;
        case Kind::HalfPlaneBand:
            return psi(p) <= a_ && phi(p) >= 0 && phi(p) <= b_;
        case Kind::Complement:
            return !left_->contains(p);
        case Kind::Intersection:
            return left_->contains(p) && right_->contains(p);
    }
    return false;
}

std::optional<PsiInterval> Region::psi_interval(std::int64_t ph) const {
    switch (kind_) {
        case Kind::Empty:
            return PsiInterval::none();
        case Kind::WholePlane:
            return PsiInterval::all();
        case Kind::Rectangle:
            if (ph < a_ || ph > b_) return PsiInterval::none();
            return PsiInterval{c_, d_};
        case Kind::HalfPlaneBand:
            if (ph < 0 || ph > b_) return PsiInterval::none();
            return PsiInterval{std::numeric_limits<std::int64_t>::min(), a_};
        case Kind::Complement: {
            auto inner = left_->psi_interval(ph);
            if (inner && inner->empty()) return PsiInterval::all();
            return std::nullopt;  // a punctured slice is not an interval
        }
        case Kind::Intersection: {
            auto l = left_->psi_interval(ph);
            auto r = right_->psi_interval(ph);
            if (!l || !r) return std::nullopt;
            return l->clipped(*r);
        }
    }
    return std::nullopt;
}

std::int64_t Region::phi_lo() const { return a_; }
std::int64_t Region::phi_hi() const { return b_; }
std::int64_t Region::psi_lo() const { return c_; }
std::int64_t Region::psi_hi() const { return d_; }

}  // namespace lpplab
