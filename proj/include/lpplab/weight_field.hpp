#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/region.hpp"

namespace lpplab {

namespace rng {

/// splitmix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Stateless counter hash of (seed, trial, x, y). Every input word passes
/// through at least two finalizer rounds before the output is taken.
constexpr std::uint64_t counter_bits(std::uint64_t stream, std::int64_t x,
                                     std::int64_t y) noexcept {
    std::uint64_t h = stream;
    h = mix64(h ^ (static_cast<std::uint64_t>(x) + kGolden));
    h = mix64(h ^ (static_cast<std::uint64_t>(y) + 2 * kGolden));
    return mix64(h + kGolden);
}

/// Per-(seed, trial) stream constant, hashed once per field.
constexpr std::uint64_t stream_of(std::uint64_t master_seed, std::uint64_t trial) noexcept {
    return mix64(mix64(master_seed + kGolden) ^ (trial + 2 * kGolden));
}

/// Uniform on (0,1) from the top 53 bits, offset by half a lattice step so the
/// value is never exactly 0 or 1.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rng

/// A reproducible random environment: each vertex carries an Exp(1) weight
/// that is a pure function of (master_seed, trial_index, x, y). Discount
/// regions force weights to exactly 0; an override source substitutes a
/// second field's values inside a region. Fields are immutable values and
/// safe to query from any number of threads.
class WeightField {
public:
    WeightField(std::uint64_t master_seed, std::uint64_t trial_index);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t trial_index() const noexcept { return trial_index_; }

    /// Exp(1) weight at p, computed as -log1p(-U); exactly 0 inside a
    /// discount region. Throws DomainError outside the coordinate guard.
    double weight_at(Point p) const;

    /// The underlying uniform variate at p (before discount/override), on (0,1).
    double uniform_at(Point p) const;

    /// The raw counter stream when the field has no discount or override;
    /// lets bulk kernels inline the per-vertex evaluation.
    std::optional<std::uint64_t> plain_stream() const {
        if (discounts_.empty() && !override_) return stream_;
        return std::nullopt;
    }

    /// New field equal to this one outside `region` and exactly 0 inside.
    WeightField with_discount(Region region) const;

    /// Field equal to `inside` on `region` and `outside` elsewhere. The two
    /// sources must live on distinct counter domains.
    static WeightField hybrid(const WeightField& inside, const WeightField& outside,
                              Region region);

private:
    std::uint64_t master_seed_ = 0;
    std::uint64_t trial_index_ = 0;
    std::uint64_t stream_ = 0;
    std::vector<Region> discounts_;
    struct Override {
        std::shared_ptr<const WeightField> source;
        Region region;
    };
    std::optional<Override> override_;
};

/// Field for one Monte Carlo trial; distinct trial indices give statistically
/// independent per-vertex streams.
WeightField derive_trial_field(std::uint64_t master_seed, std::uint64_t trial_index);

}  // namespace lpplab
