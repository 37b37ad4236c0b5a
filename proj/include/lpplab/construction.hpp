#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lpplab/geometry.hpp"
#include "lpplab/lattice.hpp"
#include "lpplab/passage.hpp"
#include "lpplab/region.hpp"
#include "lpplab/weight_field.hpp"

namespace lpplab {

struct ConstructionConfig {
    double kappa_a = 10.0;  // A threshold: f(u,v) + kappa_a * t^2 * r^(1/3)
    double kappa_d = 1.0;   // D threshold: 4r + kappa_d * t^2 * r^(1/3)
    double epsilon = 0.05;  // admissible t range: t <= (1 - epsilon) * r^(1/3)
    bool crossing_at_2r = true;

    friend bool operator==(const ConstructionConfig&, const ConstructionConfig&) = default;
};

/// The proof geometry for parameters (r, t): the tilted rectangle R between
/// the anchor points u and v, the band S below psi = t * r^(2/3), and the
/// passage-time thresholds for the events evaluated on it.
struct Construction {
    std::int64_t r = 0;
    double t = 0.0;
    std::int64_t n = 0;
    Point u, v;
    Region rect = Region::empty();  // R
    Region band = Region::empty();  // S
    std::int64_t rect_phi_lo = 0, rect_phi_hi = 0;
    std::int64_t rect_psi_lo = 0, rect_psi_hi = 0;
    std::int64_t band_psi_max = 0;
    std::int64_t crossing_phi = 0;
    double threshold_a = 0.0, threshold_d = 0.0;
    double r_cbrt = 0.0, r_pow23 = 0.0;
    ConstructionConfig config;
};

Construction build_construction(std::int64_t r, double t, std::int64_t n,
                                ConstructionConfig config = {});

/// Boolean outcomes and underlying numeric values of the events on one field.
struct EventReport {
    bool A = false, B = false, C = false, D = false;
    bool E = false, E_prime = false, E_R = false;

    std::optional<double> constrained_uv_R;   // max passage u -> v inside R
    std::optional<double> passage_o_u;        // absent when o is not below u
    std::optional<double> passage_v_r;        // absent when v is not below (r, r)
    std::optional<double> constrained_o_r_S;  // absent when no admissible path in S
    std::optional<double> concat_time;        // T(o,u) + A-passage + T(v,r)
    std::int64_t psi_crossing_n = 0;
    std::int64_t psi_crossing_R = 0;
    bool gamma_n_below_R = false;
    bool gamma_R_below_R = false;
    std::int64_t tf_r = 0;  // TF^r(r)
    std::int64_t tf_n = 0;  // TF^n(r)

    friend bool operator==(const EventReport&, const EventReport&) = default;
};

EventReport evaluate_events(const WeightField& field, const Construction& c);

/// Instance-level check of the deterministic implications between the events
/// and the passage-time comparisons behind them. Each flag is true when the
/// corresponding implication holds (vacuously or not) on this instance.
struct AuditReport {
    EventReport events;
    bool concat_defined = false;
    bool antecedent_i = false;
    bool implication_i_ok = true;    // concat beats S  =>  TF^r(r) > t r^(2/3)
    bool superadditivity_ok = true;  // concat <= T(o, (r,r))
    bool ordering_ok = true;         // E at L_2r  =>  Gamma_r below Gamma_n on [0, 2r]
    bool implication_ii_ok = true;   // antecedent and E  =>  TF^n(r) > t r^(2/3)
    bool nesting_ok = true;          // E' => E^R => E
    double passage_o_r = 0.0;

    bool all_ok() const {
        return implication_i_ok && superadditivity_ok && ordering_ok && implication_ii_ok &&
               nesting_ok;
    }
};

AuditReport implication_audit(const WeightField& field, const Construction& c);

/// Partition of R between u and v into delta_inv segments: midpoints, the
/// constrained passage time of each segment, its temporal deviation, and the
/// concatenation inequality against the full constrained passage.
struct PartitionReport {
    std::vector<Point> midpoints;
    std::vector<double> segment_times;
    std::vector<double> segment_deviations;
    double segments_total = 0.0;
    double constrained_uv = 0.0;
    bool superadditive_ok = false;
};

PartitionReport lemma_partition_report(const WeightField& field, const Construction& c,
                                       std::int64_t delta_inv);

/// Re-randomization test of the events' dependency structure: swapping the
/// weights inside R (minus the far anchor v, whose weight feeds T(v, r) only)
/// must leave E^R, B, C, D unchanged; swapping the weights outside must leave
/// A unchanged.
struct IndependenceReport {
    std::int64_t pairs = 0;
    std::int64_t inside_violations = 0;
    std::int64_t outside_violations = 0;

    bool ok() const { return inside_violations == 0 && outside_violations == 0; }
};

IndependenceReport independence_audit(std::uint64_t seed, const Construction& c,
                                      std::int64_t pairs);

}  // namespace lpplab
