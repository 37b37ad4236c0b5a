#include "lpplab/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lpplab/geometry.hpp"
#include "lpplab/montecarlo.hpp"
#include "lpplab/passage.hpp"
#include "lpplab/region.hpp"
#include "lpplab/weight_field.hpp"

namespace lpplab {

namespace {

bool same_path(const GeodesicPath& a, const GeodesicPath& b) {
    return a.vertices == b.vertices;
}

double rel_err(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

}  // namespace

OracleOutcome oracle_suite(std::int64_t instances, std::uint64_t seed) {
    OracleOutcome out;
    out.instances = instances;
    std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
    auto uni = [&](std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    auto note_failure = [&](std::int64_t i, const std::string& what) {
        ++out.mismatches;
        if (out.first_failure.empty()) {
            out.first_failure = "instance " + std::to_string(i) + ": " + what;
        }
    };

    for (std::int64_t i = 0; i < instances; ++i) {
        const WeightField field = derive_trial_field(seed, 10'000 + static_cast<std::uint64_t>(i));
        const Point u{uni(-4, 4), uni(-4, 4)};
        const Point v{u.x + uni(0, 8), u.y + uni(0, 8)};

        // unconstrained
        {
            const double t_dp = last_passage_time(field, u, v);
            const GeodesicPath p_dp = geodesic(field, u, v);
            const auto bf = brute_force_passage(field, u, v);
            ++out.comparisons;
            const double err = rel_err(t_dp, bf->first);
            out.max_rel_err = std::max(out.max_rel_err, err);
            if (err > 1e-9 || !same_path(p_dp, bf->second)) {
                note_failure(i, "unconstrained time/path mismatch");
            }
            if (rel_err(p_dp.passage_time, t_dp) > 1e-9) {
                note_failure(i, "geodesic time disagrees with passage time");
            }
        }

        // constrained to a random phi-psi rectangle (sometimes excluding u)
        {
            const std::int64_t plo = std::min(psi(u), psi(v)) - uni(0, 6);
            std::int64_t phi_ = std::max(psi(u), psi(v)) + uni(0, 6);
            std::int64_t cut_lo = plo;
            if (uni(0, 4) == 0) {
                cut_lo = psi(u) + 1;  // exclude the start vertex
                phi_ = std::max(phi_, cut_lo);
            }
            const Region region = Region::rectangle(phi(u), phi(v), cut_lo, phi_);
            const auto dp = constrained_passage(field, u, v, region);
            const auto bf = brute_force_passage(field, u, v, region);
            ++out.comparisons;
            if (dp.has_value() != bf.has_value()) {
                note_failure(i, "constrained existence mismatch");
            } else if (dp) {
                const double err = rel_err(dp->first, bf->first);
                out.max_rel_err = std::max(out.max_rel_err, err);
                if (err > 1e-9 || !same_path(dp->second, bf->second)) {
                    note_failure(i, "constrained time/path mismatch");
                }
            }
        }

        // discounted on a random sub-rectangle
        {
            const std::int64_t f_lo = phi(u) + uni(0, std::max<std::int64_t>(0, phi(v) - phi(u)));
            const std::int64_t f_hi = std::min(phi(v), f_lo + uni(0, 6));
            const std::int64_t p_mid = psi(u) + uni(-4, 4);
            const Region disc = Region::rectangle(f_lo, f_hi, p_mid - uni(0, 4), p_mid + uni(0, 4));
            const auto dp = discounted_passage(field, u, v, disc);
            const auto bf = brute_force_passage(field, u, v, std::nullopt, disc);
            ++out.comparisons;
            const double err = rel_err(dp.first, bf->first);
            out.max_rel_err = std::max(out.max_rel_err, err);
            if (err > 1e-9 || !same_path(dp.second, bf->second)) {
                note_failure(i, "discounted time/path mismatch");
            }
        }
    }
    return out;
}

std::vector<CheckResult> verify_suite(std::uint64_t seed) {
    std::vector<CheckResult> results;
    auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        results.push_back({name, ok, detail});
    };
    std::ostringstream detail;

    // purity: repeated queries are bitwise identical
    {
        const WeightField f = derive_trial_field(seed, 0);
        bool ok = true;
        for (int rep = 0; rep < 10 && ok; ++rep) {
            for (std::int64_t i = 0; i < 1000; ++i) {
                const Point p{i * 37 % 1000, i * 91 % 1000};
                if (f.weight_at(p) != f.weight_at(p)) ok = false;
            }
        }
        add("purity", ok, "10x1000 repeated queries bitwise stable");
    }

    // Exp(1) mean, upper tail mass, strict positivity
    {
        const WeightField f = derive_trial_field(seed, 1);
        const std::int64_t n = 1'000'000;
        double sum = 0.0;
        std::int64_t above2 = 0;
        double min_w = 1e300;
        for (std::int64_t i = 0; i < n; ++i) {
            const double w = f.weight_at(Point{i % 1000, i / 1000});
            sum += w;
            min_w = std::min(min_w, w);
            if (w > 2.0) ++above2;
        }
        const double mean = sum / static_cast<double>(n);
        const double frac = static_cast<double>(above2) / static_cast<double>(n);
        detail.str("");
        detail << "mean=" << mean << " P(w>2)=" << frac << " min=" << min_w;
        add("exp_distribution",
            std::abs(mean - 1.0) < 0.01 && std::abs(frac - std::exp(-2.0)) < 0.002 && min_w > 0.0,
            detail.str());
    }

    // Kolmogorov-Smirnov against the Exp(1) CDF at the 1% level
    {
        const WeightField f = derive_trial_field(seed, 2);
        const std::int64_t n = 100'000;
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            xs[static_cast<std::size_t>(i)] = f.weight_at(Point{i, -i - 7});
        }
        std::sort(xs.begin(), xs.end());
        double dmax = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double cdf = -std::expm1(-xs[static_cast<std::size_t>(i)]);
            const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - cdf;
            const double lo = cdf - static_cast<double>(i) / static_cast<double>(n);
            dmax = std::max({dmax, hi, lo});
        }
        const double crit = 1.6276 / std::sqrt(static_cast<double>(n));
        detail.str("");
        detail << "D=" << dmax << " crit(1%)=" << crit;
        add("ks_exp", dmax < crit, detail.str());
    }

    // neighbour correlation
    {
        const WeightField f = derive_trial_field(seed, 3);
        const std::int64_t n = 100'000;
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            const Point p{i % 2000, i / 2000};
            const double a = f.weight_at(p);
            const double b = f.weight_at(Point{p.x + 1, p.y});
            sx += a;
            sy += b;
            sxx += a * a;
            syy += b * b;
            sxy += a * b;
        }
        const double nd = static_cast<double>(n);
        const double corr = (sxy - sx * sy / nd) /
                            std::sqrt((sxx - sx * sx / nd) * (syy - sy * sy / nd));
        detail.str("");
        detail << "corr=" << corr;
        add("neighbour_correlation", std::abs(corr) < 0.01, detail.str());
    }

    // discount locality and hybrid boundary
    {
        const WeightField f = derive_trial_field(seed, 4);
        const Region rect = Region::rectangle(10, 40, -6, 6);
        const WeightField fd = f.with_discount(rect);
        const WeightField g = derive_trial_field(seed, 5);
        const WeightField h = WeightField::hybrid(g, f, rect);
        bool ok = true;
        for (std::int64_t i = 0; i < 1000 && ok; ++i) {
            const Point p{(i * 13) % 60 - 5, (i * 29) % 60 - 5};
            if (rect.contains(p)) {
                ok = fd.weight_at(p) == 0.0 && h.weight_at(p) == g.weight_at(p);
            } else {
                ok = fd.weight_at(p) == f.weight_at(p) && h.weight_at(p) == f.weight_at(p);
            }
        }
        add("discount_and_hybrid_locality", ok, "sampled 1000 points across the boundary");
    }

    // superadditivity and weight monotonicity on small boxes
    {
        bool super_ok = true, mono_ok = true;
        std::mt19937_64 rng(seed ^ 0xabcdULL);
        for (int i = 0; i < 100; ++i) {
            const WeightField f = derive_trial_field(seed, 600 + static_cast<std::uint64_t>(i));
            const Point u{0, 0};
            const Point v{static_cast<std::int64_t>(rng() % 7 + 1),
                          static_cast<std::int64_t>(rng() % 7 + 1)};
            const Point w{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(v.x + 1)),
                          static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(v.y + 1))};
            const double tuv = last_passage_time(f, u, v);
            const double split = last_passage_time(f, u, w) + last_passage_time(f, w, v);
            if (tuv < split - 1e-9 * std::max(1.0, std::abs(tuv))) super_ok = false;

            const Region disc = Region::rectangle(phi(u), phi(v), psi(u) - 2, psi(u) + 2);
            if (discounted_passage(f, u, v, disc).first >
                tuv + 1e-9 * std::max(1.0, std::abs(tuv))) {
                mono_ok = false;
            }
        }
        add("superadditivity", super_ok, "100 random triples");
        add("discount_monotonicity", mono_ok, "discounting never increases T");
    }

    // constraint monotonicity on nested bands
    {
        bool ok = true;
        for (int i = 0; i < 40 && ok; ++i) {
            const WeightField f = derive_trial_field(seed, 700 + static_cast<std::uint64_t>(i));
            const Point v{10, 10};
            double prev = -1.0;
            for (std::int64_t hw : {1, 2, 4, 10}) {
                const Region band = Region::rectangle(0, phi(v), -hw, hw);
                const auto res = constrained_passage(f, Point{0, 0}, v, band);
                const double cur = res ? res->first : -1.0;
                if (cur < prev - 1e-12) ok = false;
                prev = cur;
            }
        }
        add("constraint_monotonicity", ok, "wider bands never decrease passage");
    }

    // parallel determinism of the trial engine
    {
        CampaignSpec spec;
        spec.kind = CampaignSpec::Kind::TailCurve;
        spec.stat = {StatKind::TfGlobal, 0, 0};
        spec.n = 64;
        spec.trials = 64;
        spec.master_seed = seed;
        spec.t_grid = {0.5, 1.0, 1.5};
        spec.workers = 1;
        const auto serial = run_stat_trials(spec);
        spec.workers = 4;
        const auto parallel = run_stat_trials(spec);
        bool ok = serial.size() == parallel.size();
        for (std::size_t i = 0; ok && i < serial.size(); ++i) {
            ok = serial[i].normalized == parallel[i].normalized && serial[i].raw == parallel[i].raw;
        }
        add("parallel_determinism", ok, "1 vs 4 workers bitwise identical samples");
    }

    // Wilson interval reference points
    {
        const auto z = normal_quantile(0.975);
        const auto e0 = estimate_probability(0, 100, 0.95);
        const auto e1 = estimate_probability(100, 100, 0.95);
        const auto e2 = estimate_probability(50, 100, 0.95);
        const double hi_expect = z * z / (100.0 + z * z);
        const bool ok = e0.p_hat == 0.0 && e0.ci_low == 0.0 &&
                        std::abs(e0.ci_high - hi_expect) < 1e-12 && e1.ci_high == 1.0 &&
                        std::abs((e2.ci_high - 0.5) - (0.5 - e2.ci_low)) < 1e-12;
        detail.str("");
        detail << "upper(0/100)=" << e0.ci_high;
        add("wilson_reference", ok, detail.str());
    }

    return results;
}

}  // namespace lpplab
