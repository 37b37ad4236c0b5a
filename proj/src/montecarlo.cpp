#include "lpplab/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "lpplab/geometry.hpp"
#include "lpplab/passage.hpp"

namespace lpplab {

StatSample eval_statistic(const WeightField& field, const Statistic& stat, std::int64_t n) {
    const Point o{0, 0};
    const Point nn{n, n};
    switch (stat.kind) {
        case StatKind::TfLocal: {
            const GeodesicPath g = geodesic(field, o, nn);
            const double tf =
                static_cast<double>(transversal_fluctuation(g, stat.r));
            return {tf / std::cbrt(static_cast<double>(stat.r * stat.r)), tf};
        }
        case StatKind::TfGlobal: {
            const GeodesicPath g = geodesic(field, o, nn);
            const double tf = static_cast<double>(transversal_fluctuation(g, n));
            return {tf / std::cbrt(static_cast<double>(n * n)), tf};
        }
        case StatKind::TemporalUpper: {
            const double time = last_passage_time(field, o, nn);
            return {temporal_deviation(time, o, nn), time};
        }
        case StatKind::TemporalLower: {
            const double time = last_passage_time(field, o, nn);
            return {-temporal_deviation(time, o, nn), time};
        }
        case StatKind::PsiAtLine: {
            const GeodesicPath g = geodesic(field, o, nn);
            const double ps = static_cast<double>(psi(crossing_point(g, stat.line_phi)));
            return {ps, ps};
        }
    }
    throw DomainError("unknown statistic kind");
}

void CampaignSpec::validate() const {
    if (trials < 1) throw DomainError("campaign: trials must be >= 1");
    if (n < 1 && kind != Kind::ScalingFit) throw DomainError("campaign: n must be >= 1");
    auto check_increasing = [](const auto& grid, const char* name) {
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i - 1] < grid[i])) {
                throw DomainError(std::string("campaign: ") + name +
                                  " grid must be strictly increasing");
            }
        }
    };
    check_increasing(t_grid, "t");
    check_increasing(n_grid, "n");
    switch (kind) {
        case Kind::TailCurve:
            if (t_grid.empty()) throw DomainError("campaign: empty t grid");
            if (stat.kind == StatKind::PsiAtLine) {
                throw DomainError("campaign: tail curves need a tail statistic");
            }
            if (stat.kind == StatKind::TfLocal && (stat.r < 1 || stat.r > n)) {
                throw DomainError("campaign: tf-local requires 1 <= r <= n");
            }
            break;
        case Kind::EventTable:
        case Kind::AuditSuite:
            if (n < r) throw DomainError("campaign: requires n >= r");
            break;
        case Kind::ScalingFit:
            if (n_grid.size() < 4) throw DomainError("campaign: n grid needs >= 4 points");
            break;
    }
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile requires p in (0,1)");
    // Acklam's rational approximation, |relative error| < 1.2e-9.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double s = q * q;
    return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * q /
           (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

ProportionEstimate estimate_probability(std::int64_t successes, std::int64_t trials,
                                        double confidence) {
    if (trials < 1) throw DomainError("estimate: trials must be >= 1");
    if (successes < 0 || successes > trials) {
        throw DomainError("estimate: successes must lie in [0, trials]");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw DomainError("estimate: confidence must lie in (0, 1)");
    }
    const double nd = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nd;
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nd;
    const double center = (p + z2 / (2.0 * nd)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

TailCurve curve_from_samples(const std::vector<double>& values, const std::vector<double>& t_grid,
                             double confidence) {
    if (t_grid.empty()) throw DomainError("tail curve: empty threshold grid");
    TailCurve curve;
    curve.rows.reserve(t_grid.size());
    for (const double t : t_grid) {
        std::int64_t successes = 0;
        for (const double v : values) {
            if (v > t) ++successes;
        }
        const auto est =
            estimate_probability(successes, static_cast<std::int64_t>(values.size()), confidence);
        curve.rows.push_back({t, successes, static_cast<std::int64_t>(values.size()), est.p_hat,
                              est.ci_low, est.ci_high});
    }
    return curve;
}

std::vector<StatSample> run_stat_trials(const CampaignSpec& spec) {
    spec.validate();
    std::vector<StatSample> samples(static_cast<std::size_t>(spec.trials));
    run_indexed_parallel(spec.trials, spec.workers, [&](std::int64_t i) {
        const WeightField field =
            derive_trial_field(spec.master_seed, static_cast<std::uint64_t>(i));
        samples[static_cast<std::size_t>(i)] = eval_statistic(field, spec.stat, spec.n);
    });
    return samples;
}

TailCurve tail_curve(const CampaignSpec& spec) {
    if (spec.kind != CampaignSpec::Kind::TailCurve) {
        throw DomainError("tail curve: spec kind mismatch");
    }
    const std::vector<StatSample> samples = run_stat_trials(spec);
    std::vector<double> values(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) values[i] = samples[i].normalized;
    return curve_from_samples(values, spec.t_grid, spec.confidence);
}

FitResult fit_log_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("fit: need at least two points");
    }
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit: degenerate abscissa");
    FitResult fit;
    fit.coefficient = sxy / sxx;
    fit.intercept = my - fit.coefficient * mx;
    fit.points_used = n;
    double ss_res = 0.0, ss_tot = 0.0;
    fit.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double res = y[i] - (fit.intercept + fit.coefficient * x[i]);
        fit.residuals[i] = res;
        ss_res += res * res;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
    return fit;
}

FitResult fit_tail_exponent(const TailCurve& curve, double beta) {
    std::vector<double> xs, ys;
    for (const TailCurveRow& row : curve.rows) {
        if (row.successes < 5) continue;  // log of tiny counts is estimation noise
        xs.push_back(std::pow(row.t, beta));
        ys.push_back(std::log(row.p_hat));
    }
    if (xs.size() < 3) {
        throw DomainError("tail fit: fewer than 3 rows with at least 5 successes");
    }
    FitResult fit = fit_log_linear(xs, ys);
    fit.model = "ln p = a - c * t^" + std::to_string(beta);
    fit.coefficient = -fit.coefficient;  // report the decay constant
    return fit;
}

double sample_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    const double frac = h - std::floor(h);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

ScalingFitResult fit_scaling_exponent(ScalingKind kind, const std::vector<std::int64_t>& n_grid,
                                      std::int64_t trials, std::uint64_t master_seed,
                                      int workers) {
    if (n_grid.size() < 4) throw DomainError("scaling fit: n grid needs >= 4 points");
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (!(n_grid[i - 1] < n_grid[i])) {
            throw DomainError("scaling fit: n grid must be strictly increasing");
        }
    }
    ScalingFitResult out;
    out.n_grid = n_grid;
    std::vector<double> xs, ys;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::int64_t n = n_grid[gi];
        std::vector<double> raw(static_cast<std::size_t>(trials));
        const Statistic stat{kind == ScalingKind::TfMedian ? StatKind::TfGlobal
                                                           : StatKind::TemporalUpper,
                             0, 0};
        // Distinct trial sub-streams per grid level.
        const std::uint64_t level_seed = master_seed + 0x1000003 * static_cast<std::uint64_t>(gi);
        run_indexed_parallel(trials, workers, [&](std::int64_t i) {
            const WeightField field = derive_trial_field(level_seed, static_cast<std::uint64_t>(i));
            raw[static_cast<std::size_t>(i)] = eval_statistic(field, stat, n).raw;
        });
        const double level = kind == ScalingKind::TfMedian
                                 ? sample_quantile(raw, 0.5)
                                 : sample_quantile(raw, 0.75) - sample_quantile(raw, 0.25);
        if (!(level > 0.0)) throw DomainError("scaling fit: nonpositive level statistic");
        out.level_stats.push_back(level);
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(level));
    }
    out.fit = fit_log_linear(xs, ys);
    out.fit.model = kind == ScalingKind::TfMedian ? "ln median TF = a + alpha * ln n"
                                                  : "ln IQR T = a + alpha * ln n";
    return out;
}

std::vector<EventReport> run_event_trials(const CampaignSpec& spec, const Construction& c) {
    spec.validate();
    std::vector<EventReport> reports(static_cast<std::size_t>(spec.trials));
    run_indexed_parallel(spec.trials, spec.workers, [&](std::int64_t i) {
        const WeightField field =
            derive_trial_field(spec.master_seed, static_cast<std::uint64_t>(i));
        reports[static_cast<std::size_t>(i)] = evaluate_events(field, c);
    });
    return reports;
}

std::vector<AuditReport> run_audit_trials(const CampaignSpec& spec, const Construction& c) {
    spec.validate();
    std::vector<AuditReport> reports(static_cast<std::size_t>(spec.trials));
    run_indexed_parallel(spec.trials, spec.workers, [&](std::int64_t i) {
        const WeightField field =
            derive_trial_field(spec.master_seed, static_cast<std::uint64_t>(i));
        reports[static_cast<std::size_t>(i)] = implication_audit(field, c);
    });
    return reports;
}

}  // namespace lpplab
