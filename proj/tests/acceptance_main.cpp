// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Optional arguments select criterion numbers, e.g.
// `acceptance 1 2 9`. The long statistical campaigns use all cores by
// default; full run takes tens of minutes on a 2-core desktop.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpplab/construction.hpp"
#include "lpplab/geometry.hpp"
#include "lpplab/montecarlo.hpp"
#include "lpplab/records.hpp"
#include "lpplab/selfcheck.hpp"

using namespace lpplab;

namespace {

const Point o{0, 0};
constexpr std::uint64_t kSeed = 1;

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// ---------------------------------------------------------------- criterion 1
bool criterion_oracle(std::string& detail) {
    const double t0 = now_s();
    const OracleOutcome out = oracle_suite(500, kSeed);
    const double dt = now_s() - t0;
    std::ostringstream ss;
    ss << out.comparisons << " comparisons, " << out.mismatches << " mismatches, max rel err "
       << out.max_rel_err << ", " << dt << "s";
    if (!out.first_failure.empty()) ss << "; " << out.first_failure;
    detail = ss.str();
    return out.mismatches == 0 && out.max_rel_err <= 1e-9 && dt < 60.0;
}

// ---------------------------------------------------------------- criterion 2
bool criterion_endpoint(std::string& detail) {
    for (std::uint64_t i = 0; i < 100; ++i) {
        const WeightField f = derive_trial_field(kSeed, i);
        const Point u{static_cast<std::int64_t>(i % 13), static_cast<std::int64_t>(i % 7)};
        if (last_passage_time(f, u, u) != 0.0) {
            detail = "T(u,u) != 0";
            return false;
        }
        if (last_passage_time(f, o, Point{1, 0}) != f.weight_at(o)) {
            detail = "T(o,(1,0)) != X_o";
            return false;
        }
    }
    detail = "T(u,u)=0 and T(o,(1,0))=X_o exact on 100 fields";
    return true;
}

// ---------------------------------------------------------------- criterion 3
bool criterion_lln(std::string& detail) {
    const std::int64_t n = 1000, trials = 200;
    std::vector<double> per_n(static_cast<std::size_t>(trials));
    run_indexed_parallel(trials, 0, [&](std::int64_t i) {
        const WeightField f = derive_trial_field(kSeed + 3, static_cast<std::uint64_t>(i));
        per_n[static_cast<std::size_t>(i)] =
            last_passage_time(f, o, Point{n, n}) / static_cast<double>(n);
    });
    double mean = 0.0;
    for (const double v : per_n) mean += v;
    mean /= static_cast<double>(trials);
    std::ostringstream ss;
    ss << "mean T(o,n)/n = " << mean << " over " << trials << " trials at n = " << n;
    detail = ss.str();
    return mean >= 3.5 && mean < 4.0;
}

// ---------------------------------------------------------------- criterion 4
bool criterion_scaling(std::string& detail) {
    const std::vector<std::int64_t> grid{128, 256, 512, 1024, 2048};
    const ScalingFitResult tf = fit_scaling_exponent(ScalingKind::TfMedian, grid, 800, kSeed, 0);
    const ScalingFitResult tp =
        fit_scaling_exponent(ScalingKind::TemporalIqr, grid, 800, kSeed, 0);
    std::ostringstream ss;
    ss << "TF alpha = " << tf.fit.coefficient << " (R2 " << tf.fit.r_squared << "), temporal alpha = "
       << tp.fit.coefficient << " (R2 " << tp.fit.r_squared << ")";
    detail = ss.str();
    const bool tf_ok = tf.fit.coefficient >= 2.0 / 3.0 - 0.08 &&
                       tf.fit.coefficient <= 2.0 / 3.0 + 0.08;
    const bool tp_ok = tp.fit.coefficient >= 1.0 / 3.0 - 0.08 &&
                       tp.fit.coefficient <= 1.0 / 3.0 + 0.08;
    return tf_ok && tp_ok;
}

// ---------------------------------------------------------------- criterion 5
bool criterion_tf_tail(std::string& detail) {
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::TailCurve;
    spec.stat = {StatKind::TfLocal, 256, 0};
    spec.n = 1024;
    spec.trials = 20'000;
    spec.master_seed = kSeed + 5;
    spec.t_grid = {0.8, 1.2, 1.6, 2.0, 2.4};
    const TailCurve curve = tail_curve(spec);

    bool positive = true;
    for (const TailCurveRow& row : curve.rows) {
        if (row.t <= 2.0 && !(row.p_hat > 0.0 && row.ci_low > 0.0)) positive = false;
    }
    const FitResult cubic = fit_tail_exponent(curve, 3.0);
    const FitResult three_half = fit_tail_exponent(curve, 1.5);
    std::ostringstream ss;
    ss << "R2(beta=3) = " << cubic.r_squared << ", R2(beta=3/2) = " << three_half.r_squared
       << ", c3 = " << cubic.coefficient << ", rows:";
    for (const TailCurveRow& row : curve.rows) ss << " p(" << row.t << ")=" << row.p_hat;
    detail = ss.str();
    return cubic.r_squared >= 0.9 && cubic.r_squared > three_half.r_squared && positive;
}

// ---------------------------------------------------------------- criterion 6
bool criterion_temporal_tails(std::string& detail) {
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::TailCurve;
    spec.stat = {StatKind::TemporalUpper, 0, 0};
    spec.n = 1024;
    spec.trials = 20'000;
    spec.master_seed = kSeed + 6;
    spec.t_grid = {0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8};
    // one passage-time evaluation serves both tails
    const std::vector<StatSample> samples = run_stat_trials(spec);
    std::vector<double> upper(samples.size()), lower(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        upper[i] = samples[i].normalized;
        lower[i] = -samples[i].normalized;
    }
    const TailCurve up_curve = curve_from_samples(upper, spec.t_grid, 0.95);
    const TailCurve lo_curve =
        curve_from_samples(lower, {2.0, 3.0, 4.0, 5.0, 6.0, 7.0}, 0.95);

    const FitResult up_right = fit_tail_exponent(up_curve, 1.5);
    const FitResult up_wrong = fit_tail_exponent(up_curve, 3.0);
    const FitResult lo_right = fit_tail_exponent(lo_curve, 3.0);
    const FitResult lo_wrong = fit_tail_exponent(lo_curve, 1.5);
    std::ostringstream ss;
    ss << "upper R2(3/2) = " << up_right.r_squared << " vs R2(3) = " << up_wrong.r_squared
       << "; lower R2(3) = " << lo_right.r_squared << " vs R2(3/2) = " << lo_wrong.r_squared;
    detail = ss.str();
    return up_right.r_squared >= 0.85 && up_right.r_squared > up_wrong.r_squared &&
           lo_right.r_squared >= 0.85 && lo_right.r_squared > lo_wrong.r_squared;
}

// ---------------------------------------------------------------- criterion 7
bool criterion_event_calculus(std::string& detail) {
    struct Setup {
        std::int64_t r;
        double t;
        std::int64_t n;
    };
    std::ostringstream ss;
    bool ok = true;
    for (const Setup s : {Setup{512, 1.0, 1024}, Setup{729, 1.5, 2187}}) {
        const Construction c = build_construction(s.r, s.t, s.n);
        CampaignSpec spec;
        spec.kind = CampaignSpec::Kind::AuditSuite;
        spec.r = s.r;
        spec.n = s.n;
        spec.t_construction = s.t;
        spec.trials = 500;
        spec.master_seed = kSeed + 7;
        const std::vector<AuditReport> reports = run_audit_trials(spec, c);
        std::int64_t nesting = 0, imp_i = 0, super = 0, imp_ii = 0, ordering = 0, fired = 0;
        for (const AuditReport& a : reports) {
            nesting += a.nesting_ok ? 0 : 1;
            imp_i += a.implication_i_ok ? 0 : 1;
            super += a.superadditivity_ok ? 0 : 1;
            imp_ii += a.implication_ii_ok ? 0 : 1;
            ordering += a.ordering_ok ? 0 : 1;
            fired += a.antecedent_i ? 1 : 0;
        }
        ss << "(r=" << s.r << ",t=" << s.t << ",n=" << s.n << "): violations nesting=" << nesting
           << " i=" << imp_i << " iii=" << super << " ii=" << imp_ii << " ordering=" << ordering
           << " [antecedent fired " << fired << "/500]  ";
        ok = ok && nesting == 0 && imp_i == 0 && super == 0 && imp_ii == 0 && ordering == 0;
    }
    detail = ss.str();
    return ok;
}

// ---------------------------------------------------------------- criterion 8
bool criterion_independence(std::string& detail) {
    const Construction c = build_construction(512, 1.0, 1024);
    const IndependenceReport rep = independence_audit(kSeed + 8, c, 100);
    std::ostringstream ss;
    ss << rep.pairs << " pairs, inside violations " << rep.inside_violations
       << ", outside violations " << rep.outside_violations;
    detail = ss.str();
    return rep.ok();
}

// ---------------------------------------------------------------- criterion 9
bool criterion_symmetry_mass(std::string& detail) {
    const Construction c = build_construction(512, 2.0, 1024);
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::EventTable;
    spec.r = 512;
    spec.n = 1024;
    spec.t_construction = 2.0;
    spec.trials = 2000;
    spec.master_seed = kSeed + 9;
    const std::vector<EventReport> reports = run_event_trials(spec, c);
    std::int64_t e_count = 0, er_count = 0;
    for (const EventReport& r : reports) {
        e_count += r.E ? 1 : 0;
        er_count += r.E_R ? 1 : 0;
    }
    const double pe = static_cast<double>(e_count) / static_cast<double>(spec.trials);
    const double per = static_cast<double>(er_count) / static_cast<double>(spec.trials);
    std::ostringstream ss;
    ss << "P(E) = " << pe << ", P(E^R) = " << per << " over " << spec.trials << " trials";
    detail = ss.str();
    return pe >= 0.45 && pe <= 0.55 && per >= 0.2;
}

// --------------------------------------------------------------- criterion 10
bool criterion_determinism_perf(std::string& detail) {
    std::ostringstream ss;
    bool ok = true;

    // byte-identical sorted JSONL at 1 and 8 workers
    for (const int workers : {1, 8}) {
        CampaignSpec spec;
        spec.kind = CampaignSpec::Kind::TailCurve;
        spec.stat = {StatKind::TfLocal, 64, 0};
        spec.n = 256;
        spec.trials = 400;
        spec.master_seed = kSeed + 10;
        spec.t_grid = {0.5, 1.0, 1.5, 2.0};
        spec.workers = workers;
        const std::vector<StatSample> samples = run_stat_trials(spec);
        JsonlWriter writer("/tmp/lpplab_acc_det_" + std::to_string(workers) + ".jsonl");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            writer.write(stat_record(static_cast<std::int64_t>(i), samples[i]));
        }
        std::vector<double> values(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) values[i] = samples[i].normalized;
        for (const TailCurveRow& row : curve_from_samples(values, spec.t_grid, 0.95).rows) {
            writer.write(curve_row_record(row));
        }
    }
    {
        std::ifstream a("/tmp/lpplab_acc_det_1.jsonl"), b("/tmp/lpplab_acc_det_8.jsonl");
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        const bool identical = sa.str() == sb.str() && !sa.str().empty();
        ss << "jsonl(1 worker) " << (identical ? "==" : "!=") << " jsonl(8 workers); ";
        ok = ok && identical;
    }

    // one n = 2048 trial within 2 seconds and O(n) working memory
    {
        detail::alloc_reset();
        const double t0 = now_s();
        const WeightField f = derive_trial_field(kSeed + 11, 0);
        const StatSample s = eval_statistic(f, {StatKind::TfGlobal, 0, 0}, 2048);
        const double dt = now_s() - t0;
        const long long peak = detail::alloc_peak_doubles();
        const long long bound = (1 << 16) + 64 * 2049;
        ss << "n=2048 trial " << dt << "s (TF=" << s.raw << "), peak " << peak
           << " doubles (bound " << bound << ")";
        ok = ok && dt <= 2.0 && peak <= bound;
    }
    detail = ss.str();
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "oracle equivalence on 500 random instances", criterion_oracle},
        {2, "endpoint convention", criterion_endpoint},
        {3, "law-of-large-numbers centering", criterion_lln},
        {4, "scaling exponents 2/3 and 1/3", criterion_scaling},
        {5, "local TF tail shape at r=256, n=1024", criterion_tf_tail},
        {6, "temporal tail exponents 3/2 and 3", criterion_temporal_tails},
        {7, "event calculus, zero tolerance", criterion_event_calculus},
        {8, "structural independence of A and E^R", criterion_independence},
        {9, "symmetry of E and mass of E^R", criterion_symmetry_mass},
        {10, "determinism and performance", criterion_determinism_perf},
    };

    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        std::string detail;
        const double t0 = now_s();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double dt = now_s() - t0;
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    detail.c_str(), dt);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
