#include "lpplab/construction.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace lpplab {

namespace {

/// r^(1/3) with an exactness snap for perfect cubes, so that constructions
/// like r = 729 produce exact anchor coordinates.
double cbrt_exact(std::int64_t r) {
    const double c = std::cbrt(static_cast<double>(r));
    const double cr = std::round(c);
    if (cr * cr * cr == static_cast<double>(r)) return cr;
    return c;
}

bool below_rect(const GeodesicPath& path, const Construction& c) {
    const std::int64_t start = phi(path.start());
    const std::int64_t lo = std::max(c.rect_phi_lo, start);
    const std::int64_t hi = std::min(c.rect_phi_hi, phi(path.end()));
    for (std::int64_t ph = lo; ph <= hi; ++ph) {
        if (psi(path.vertices[static_cast<std::size_t>(ph - start)]) >= c.rect_psi_lo) {
            return false;
        }
    }
    return true;
}

struct Instance {
    GeodesicPath gamma_n, gamma_big_r, gamma_r;
    std::optional<double> t_o_u, t_v_r;
    std::optional<std::pair<double, GeodesicPath>> a_pass;
    std::optional<std::pair<double, GeodesicPath>> s_pass;
};

Instance evaluate_instance(const WeightField& field, const Construction& c) {
    Instance inst;
    const Point o{0, 0};
    const Point rr{c.r, c.r};
    const Point nn{c.n, c.n};
    inst.gamma_n = geodesic(field, o, nn);
    inst.gamma_big_r = discounted_passage(field, o, nn, c.rect).second;
    inst.gamma_r = geodesic(field, o, rr);
    if (leq(o, c.u)) inst.t_o_u = last_passage_time(field, o, c.u);
    if (leq(c.v, rr)) inst.t_v_r = last_passage_time(field, c.v, rr);
    inst.a_pass = constrained_passage(field, c.u, c.v, c.rect);
    inst.s_pass = constrained_passage(field, o, rr, c.band);
    return inst;
}

/// Everything the inside-swap half of the independence audit compares.
struct InsideSignature {
    bool e_r = false, b = false, cc = false, d = false;
    std::optional<double> t_o_u, t_v_r, s_time;
    std::int64_t psi_r = 0;
    bool below = false;

    friend bool operator==(const InsideSignature&, const InsideSignature&) = default;
};

EventReport report_from_instance(const Instance& inst, const Construction& c) {
    EventReport rep;
    rep.constrained_uv_R = inst.a_pass ? std::optional<double>(inst.a_pass->first) : std::nullopt;
    rep.passage_o_u = inst.t_o_u;
    rep.passage_v_r = inst.t_v_r;
    rep.constrained_o_r_S =
        inst.s_pass ? std::optional<double>(inst.s_pass->first) : std::nullopt;

    rep.A = inst.a_pass && inst.a_pass->first > c.threshold_a;
    rep.B = inst.t_o_u &&
            *inst.t_o_u >= f_expected(Point{0, 0}, c.u) - c.t * c.r_cbrt;
    rep.C = inst.t_v_r &&
            *inst.t_v_r >= f_expected(c.v, Point{c.r, c.r}) - c.t * c.r_cbrt;
    rep.D = !inst.s_pass || inst.s_pass->first < c.threshold_d;

    rep.psi_crossing_n = psi(crossing_point(inst.gamma_n, c.crossing_phi));
    rep.psi_crossing_R = psi(crossing_point(inst.gamma_big_r, c.crossing_phi));
    rep.gamma_n_below_R = below_rect(inst.gamma_n, c);
    rep.gamma_R_below_R = below_rect(inst.gamma_big_r, c);

    rep.E = rep.psi_crossing_n >= 0;
    rep.E_R = rep.gamma_R_below_R && rep.psi_crossing_R >= 0;
    rep.E_prime = rep.gamma_n_below_R && rep.psi_crossing_n >= 0;

    rep.tf_r = transversal_fluctuation(inst.gamma_r, c.r);
    rep.tf_n = transversal_fluctuation(inst.gamma_n, c.r);

    if (inst.t_o_u && inst.t_v_r && inst.a_pass) {
        rep.concat_time = *inst.t_o_u + inst.a_pass->first + *inst.t_v_r;
    }
    return rep;
}

}  // namespace

Construction build_construction(std::int64_t r, double t, std::int64_t n,
                                ConstructionConfig config) {
    auto fail = [](const std::string& what) { throw DomainError("construction: " + what); };
    if (r < 27) fail("requires r >= 27, got r = " + std::to_string(r));
    if (!(t > 0.0)) fail("requires t > 0");
    if (n < r) fail("requires n >= r");
    require_in_range(Point{n, n});

    Construction c;
    c.r = r;
    c.t = t;
    c.n = n;
    c.config = config;
    c.r_cbrt = cbrt_exact(r);
    c.r_pow23 = c.r_cbrt * c.r_cbrt;
    if (!(t <= (1.0 - config.epsilon) * c.r_cbrt)) {
        fail("requires t <= (1 - epsilon) * r^(1/3) = " +
             std::to_string((1.0 - config.epsilon) * c.r_cbrt));
    }

    const double offset = (t + 1.0) * c.r_pow23;
    const double third = static_cast<double>(r) / 3.0;
    c.u = Point{static_cast<std::int64_t>(std::floor(third - offset)),
                static_cast<std::int64_t>(std::ceil(third + offset))};
    c.v = Point{static_cast<std::int64_t>(std::floor(2.0 * third - offset)),
                static_cast<std::int64_t>(std::ceil(2.0 * third + offset))};
    if (!leq(c.u, c.v) || phi(c.v) - phi(c.u) < 2) fail("anchors u, v degenerate after rounding");

    const std::int64_t width = static_cast<std::int64_t>(std::ceil(c.r_pow23));
    const std::int64_t mid_lo = std::min(psi(c.u), psi(c.v));
    const std::int64_t mid_hi = std::max(psi(c.u), psi(c.v));
    c.rect_phi_lo = phi(c.u);
    c.rect_phi_hi = phi(c.v);
    c.rect_psi_lo = mid_lo - (width + 1) / 2;
    c.rect_psi_hi = mid_hi + width / 2;
    c.rect = Region::rectangle(c.rect_phi_lo, c.rect_phi_hi, c.rect_psi_lo, c.rect_psi_hi);

    c.band_psi_max = static_cast<std::int64_t>(std::floor(t * c.r_pow23));
    c.band = Region::half_plane_band(c.band_psi_max, 2 * r);

    if (c.rect_psi_lo <= c.band_psi_max) {
        fail("rectangle R and band S intersect (min psi of R = " +
             std::to_string(c.rect_psi_lo) + " <= band bound " +
             std::to_string(c.band_psi_max) + ")");
    }

    c.threshold_a = f_expected(c.u, c.v) + config.kappa_a * t * t * c.r_cbrt;
    c.threshold_d = 4.0 * static_cast<double>(r) + config.kappa_d * t * t * c.r_cbrt;
    c.crossing_phi = config.crossing_at_2r ? 2 * r : r;
    return c;
}

EventReport evaluate_events(const WeightField& field, const Construction& c) {
    return report_from_instance(evaluate_instance(field, c), c);
}

AuditReport implication_audit(const WeightField& field, const Construction& c) {
    const Instance inst = evaluate_instance(field, c);
    AuditReport audit;
    audit.events = report_from_instance(inst, c);
    const EventReport& ev = audit.events;
    audit.passage_o_r = inst.gamma_r.passage_time;

    audit.nesting_ok = (!ev.E_prime || ev.E_R) && (!ev.E_R || ev.E);

    audit.concat_defined = ev.concat_time.has_value();
    const double tf_bound = c.t * c.r_pow23;
    if (audit.concat_defined) {
        const double concat = *ev.concat_time;
        // Rounding guard: the comparisons hold exactly in real arithmetic,
        // but the three segment sums round independently.
        const double guard = 1e-12 * std::max(1.0, std::abs(concat));
        const double s_time = ev.constrained_o_r_S
                                  ? *ev.constrained_o_r_S
                                  : -std::numeric_limits<double>::infinity();
        audit.antecedent_i = concat > s_time + guard;
        if (audit.antecedent_i) {
            audit.implication_i_ok = static_cast<double>(ev.tf_r) > tf_bound;
        }
        audit.superadditivity_ok = concat <= audit.passage_o_r + guard;
    }

    if (c.crossing_phi == 2 * c.r) {
        if (ev.E) {
            audit.ordering_ok = ordering_check(inst.gamma_r, inst.gamma_n, 0, 2 * c.r);
        }
        if (audit.antecedent_i && ev.E) {
            audit.implication_ii_ok =
                audit.ordering_ok && static_cast<double>(ev.tf_n) > tf_bound;
        }
    }
    return audit;
}

PartitionReport lemma_partition_report(const WeightField& field, const Construction& c,
                                       std::int64_t delta_inv) {
    const std::int64_t dphi = phi(c.v) - phi(c.u);
    if (delta_inv < 1) throw DomainError("partition: delta_inv must be >= 1");
    if (delta_inv > dphi) {
        throw DomainError("partition: delta_inv exceeds the phi-length of R");
    }

    PartitionReport rep;
    const std::int64_t dx = c.v.x - c.u.x;
    const std::int64_t dy = c.v.y - c.u.y;
    rep.midpoints.reserve(static_cast<std::size_t>(delta_inv) + 1);
    for (std::int64_t i = 0; i <= delta_inv; ++i) {
        Point p{c.u.x + (i * dx) / delta_inv, c.u.y + (i * dy) / delta_inv};
        const std::int64_t target_phi = phi(c.u) + (i * dphi) / delta_inv;
        if (phi(p) < target_phi) p.y += 1;  // parity shift onto the intended line
        if (!c.rect.contains(p)) {
            throw DomainError("partition: midpoint " + std::to_string(i) +
                              " falls outside R after rounding");
        }
        if (i > 0 && !leq(rep.midpoints.back(), p)) {
            throw DomainError("partition: midpoints not monotone after rounding");
        }
        rep.midpoints.push_back(p);
    }

    for (std::int64_t i = 1; i <= delta_inv; ++i) {
        const Point a = rep.midpoints[static_cast<std::size_t>(i - 1)];
        const Point b = rep.midpoints[static_cast<std::size_t>(i)];
        auto seg = constrained_passage(field, a, b, c.rect);
        if (!seg) {
            throw DomainError("partition: no admissible path for segment " + std::to_string(i));
        }
        rep.segment_times.push_back(seg->first);
        rep.segment_deviations.push_back(temporal_deviation(seg->first, a, b));
        rep.segments_total += seg->first;
    }

    auto whole = constrained_passage(field, c.u, c.v, c.rect);
    if (!whole) throw DomainError("partition: no admissible path from u to v in R");
    rep.constrained_uv = whole->first;
    const double guard = 1e-12 * std::max(1.0, std::abs(rep.constrained_uv));
    rep.superadditive_ok = rep.segments_total <= rep.constrained_uv + guard;
    return rep;
}

IndependenceReport independence_audit(std::uint64_t seed, const Construction& c,
                                      std::int64_t pairs) {
    if (pairs < 1) throw DomainError("independence audit: pairs must be >= 1");
    IndependenceReport rep;
    rep.pairs = pairs;

    // Weights read by A are exactly those of R minus the far anchor v (the
    // terminal vertex of the constrained passage is never read); v's weight
    // feeds T(v, r) instead. Re-randomizing R minus {v} therefore must leave
    // E^R, B, C, D bitwise unchanged, and re-randomizing the complement must
    // leave A unchanged.
    const Region swap_region =
        Region::intersect(c.rect, Region::complement(Region::single_point(c.v)));
    const Point o{0, 0};
    const Point rr{c.r, c.r};
    const Point nn{c.n, c.n};

    auto inside_signature = [&](const WeightField& field) {
        InsideSignature sig{};
        const GeodesicPath gamma_big_r = discounted_passage(field, o, nn, c.rect).second;
        sig.below = below_rect(gamma_big_r, c);
        sig.psi_r = psi(crossing_point(gamma_big_r, c.crossing_phi));
        sig.e_r = sig.below && sig.psi_r >= 0;
        if (leq(o, c.u)) sig.t_o_u = last_passage_time(field, o, c.u);
        if (leq(c.v, rr)) sig.t_v_r = last_passage_time(field, c.v, rr);
        auto s_pass = constrained_passage(field, o, rr, c.band);
        sig.s_time = s_pass ? std::optional<double>(s_pass->first) : std::nullopt;
        sig.b = sig.t_o_u && *sig.t_o_u >= f_expected(o, c.u) - c.t * c.r_cbrt;
        sig.cc = sig.t_v_r && *sig.t_v_r >= f_expected(c.v, rr) - c.t * c.r_cbrt;
        sig.d = !sig.s_time || *sig.s_time < c.threshold_d;
        return sig;
    };
    auto a_signature = [&](const WeightField& field) {
        auto a_pass = constrained_passage(field, c.u, c.v, c.rect);
        return std::make_pair(a_pass.has_value() && a_pass->first > c.threshold_a,
                              a_pass ? std::optional<double>(a_pass->first) : std::nullopt);
    };

    for (std::int64_t i = 0; i < pairs; ++i) {
        const WeightField outside = derive_trial_field(seed, 4 * static_cast<std::uint64_t>(i));
        const WeightField in1 = derive_trial_field(seed, 4 * static_cast<std::uint64_t>(i) + 1);
        const WeightField in2 = derive_trial_field(seed, 4 * static_cast<std::uint64_t>(i) + 2);
        const WeightField common = derive_trial_field(seed, 4 * static_cast<std::uint64_t>(i) + 3);

        const WeightField f1 = WeightField::hybrid(in1, outside, swap_region);
        const WeightField f2 = WeightField::hybrid(in2, outside, swap_region);
        if (!(inside_signature(f1) == inside_signature(f2))) ++rep.inside_violations;

        const WeightField g1 = WeightField::hybrid(common, in1, swap_region);
        const WeightField g2 = WeightField::hybrid(common, in2, swap_region);
        if (!(a_signature(g1) == a_signature(g2))) ++rep.outside_violations;
    }
    return rep;
}

}  // namespace lpplab
