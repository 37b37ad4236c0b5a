#include "lpplab/weight_field.hpp"

#include <cmath>

namespace lpplab {

WeightField::WeightField(std::uint64_t master_seed, std::uint64_t trial_index)
    : master_seed_(master_seed),
      trial_index_(trial_index),
      stream_(rng::stream_of(master_seed, trial_index)) {}

double WeightField::uniform_at(Point p) const {
    require_in_range(p);
    return rng::to_unit(rng::counter_bits(stream_, p.x, p.y));
}

double WeightField::weight_at(Point p) const {
    require_in_range(p);
    for (const Region& d : discounts_) {
        if (d.contains(p)) return 0.0;
    }
    if (override_ && override_->region.contains(p)) {
        return override_->source->weight_at(p);
    }
    const double u = rng::to_unit(rng::counter_bits(stream_, p.x, p.y));
    return -std::log1p(-u);
}

WeightField WeightField::with_discount(Region region) const {
    WeightField out = *this;
    out.discounts_.push_back(std::move(region));
    return out;
}

WeightField WeightField::hybrid(const WeightField& inside, const WeightField& outside,
                                Region region) {
    if (inside.stream_ == outside.stream_) {
        throw DomainError("hybrid fields must use distinct counter domains");
    }
    WeightField out = outside;
    out.override_ = Override{std::make_shared<WeightField>(inside), std::move(region)};
    return out;
}

WeightField derive_trial_field(std::uint64_t master_seed, std::uint64_t trial_index) {
    return WeightField(master_seed, trial_index);
}

}  // namespace lpplab
