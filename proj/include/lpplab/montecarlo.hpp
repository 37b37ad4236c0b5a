#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpplab/construction.hpp"
#include "lpplab/weight_field.hpp"

namespace lpplab {

enum class StatKind { TfLocal, TfGlobal, TemporalUpper, TemporalLower, PsiAtLine };

/// A per-trial statistic. `r` parameterizes TfLocal; `line_phi` PsiAtLine.
struct Statistic {
    StatKind kind = StatKind::TfGlobal;
    std::int64_t r = 0;
    std::int64_t line_phi = 0;
};

/// One trial's statistic: `normalized` is the value in the tail scaling
/// (TF / r^(2/3), deviation / phi^(1/3)), `raw` the unscaled quantity.
struct StatSample {
    double normalized = 0.0;
    double raw = 0.0;
};

StatSample eval_statistic(const WeightField& field, const Statistic& stat, std::int64_t n);

struct CampaignSpec {
    enum class Kind { TailCurve, EventTable, ScalingFit, AuditSuite };

    Kind kind = Kind::TailCurve;
    Statistic stat{};
    std::int64_t n = 0;
    std::int64_t r = 0;
    double t_construction = 0.0;  // events / audits
    std::vector<double> t_grid;   // tail curves
    std::vector<std::int64_t> n_grid;
    std::int64_t trials = 1;
    std::uint64_t master_seed = 0;
    int workers = 0;  // 0 = runtime default
    double confidence = 0.95;
    ConstructionConfig construction{};

    void validate() const;  // throws DomainError naming the violated constraint
};

/// Serial reference runner, kept as the baseline the parallel engine is
/// checked against.
template <typename F>
void run_indexed_serial(std::int64_t count, F&& f) {
    for (std::int64_t i = 0; i < count; ++i) f(i);
}

/// Raised when a worker fails mid-campaign; whatever was computed before the
/// failure is discarded by the caller, which records a partial-results marker.
struct CampaignAborted : std::runtime_error {
    std::int64_t failed_trial;

    CampaignAborted(std::int64_t trial, const std::string& what)
        : std::runtime_error("campaign aborted at trial " + std::to_string(trial) + ": " + what),
          failed_trial(trial) {}
};

/// OpenMP runner. Trial i derives all of its randomness from (seed, i), so
/// results land in their slot regardless of scheduling. A throwing worker
/// stops the sweep and surfaces as CampaignAborted; exceptions never cross
/// the parallel region itself.
template <typename F>
void run_indexed_parallel(std::int64_t count, int workers, F&& f) {
    std::atomic<std::int64_t> failed{-1};
    std::string message;
    auto guarded = [&](std::int64_t i) {
        if (failed.load(std::memory_order_relaxed) >= 0) return;
        try {
            f(i);
        } catch (const std::exception& e) {
            std::int64_t expect = -1;
            if (failed.compare_exchange_strong(expect, i)) message = e.what();
        }
    };
    if (workers == 1) {
        run_indexed_serial(count, guarded);
    } else if (workers > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (std::int64_t i = 0; i < count; ++i) guarded(i);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < count; ++i) guarded(i);
    }
    if (failed.load() >= 0) throw CampaignAborted(failed.load(), message);
}

struct ProportionEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Wilson score interval at the given confidence level.
ProportionEstimate estimate_probability(std::int64_t successes, std::int64_t trials,
                                        double confidence);

/// Inverse standard-normal CDF (Acklam's rational approximation).
double normal_quantile(double p);

struct TailCurveRow {
    double t = 0.0;
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct TailCurve {
    std::vector<TailCurveRow> rows;
};

/// Curve of exceedance probabilities over a threshold grid. One statistic
/// evaluation per trial; thresholds applied post hoc, so rows are nested.
TailCurve curve_from_samples(const std::vector<double>& values, const std::vector<double>& t_grid,
                             double confidence);

/// Runs the trials of `spec` (kind TailCurve) and returns per-trial samples.
std::vector<StatSample> run_stat_trials(const CampaignSpec& spec);

TailCurve tail_curve(const CampaignSpec& spec);

struct FitResult {
    std::string model;
    double intercept = 0.0;    // a
    double coefficient = 0.0;  // decay constant c, or scaling exponent alpha
    double r_squared = 0.0;
    std::vector<double> residuals;
    std::size_t points_used = 0;
};

/// Ordinary least squares y = a + b*x; coefficient = b.
FitResult fit_log_linear(const std::vector<double>& x, const std::vector<double>& y);

/// Fit ln p = a - c * t^beta over rows with at least 5 successes (>= 3 rows).
FitResult fit_tail_exponent(const TailCurve& curve, double beta);

enum class ScalingKind { TfMedian, TemporalIqr };

struct ScalingFitResult {
    FitResult fit;
    std::vector<std::int64_t> n_grid;
    std::vector<double> level_stats;  // per-n median or IQR of the raw statistic
};

/// Regress ln(median TF^n(n)) or ln(IQR of T(o,(n,n))) on ln n.
ScalingFitResult fit_scaling_exponent(ScalingKind kind, const std::vector<std::int64_t>& n_grid,
                                      std::int64_t trials, std::uint64_t master_seed, int workers);

/// Per-trial event reports for an event-table campaign (kind EventTable).
std::vector<EventReport> run_event_trials(const CampaignSpec& spec, const Construction& c);

/// Per-trial audit reports (kind AuditSuite).
std::vector<AuditReport> run_audit_trials(const CampaignSpec& spec, const Construction& c);

/// Interpolating sample quantile (linear between order statistics).
double sample_quantile(std::vector<double> values, double q);

}  // namespace lpplab
