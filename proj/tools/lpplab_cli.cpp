// lpplab: exponential last passage percolation laboratory.
//
// Subcommands: tails, exponents, events, audit, lemma, oracle, verify.
// Output: canonical JSON Lines (sorted keys, 17-significant-digit floats),
// plus a companion CSV for curves and a .meta.json sidecar with wall time.
// Exit codes: 0 ok, 2 validation error, 3 invariant/audit violation, 4 I/O.

#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpplab/construction.hpp"
#include "lpplab/geometry.hpp"
#include "lpplab/montecarlo.hpp"
#include "lpplab/records.hpp"
#include "lpplab/selfcheck.hpp"

namespace {

using namespace lpplab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitViolation = 3;
constexpr int kExitIo = 4;

std::vector<double> parse_grid(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) return {std::stod(text)};
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        throw DomainError("grid must be a single value or start:stop:step");
    }
    const double start = std::stod(text.substr(0, c1));
    const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(text.substr(c2 + 1));
    if (!(step > 0.0)) throw DomainError("grid step must be positive");
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
    if (grid.empty()) throw DomainError("empty grid");
    return grid;
}

StatKind parse_stat(const std::string& name) {
    if (name == "tf-local") return StatKind::TfLocal;
    if (name == "tf-global") return StatKind::TfGlobal;
    if (name == "temporal-upper") return StatKind::TemporalUpper;
    if (name == "temporal-lower") return StatKind::TemporalLower;
    if (name == "psi-at-line") return StatKind::PsiAtLine;
    throw DomainError("unknown statistic: " + name);
}

/// Sink that duplicates every record to the .jsonl file (when given) or stdout.
class RecordSink {
public:
    RecordSink(const std::string& out_base, const std::string& format) : format_(format) {
        if (!out_base.empty() && format != "csv") {
            writer_ = std::make_unique<JsonlWriter>(out_base + ".jsonl");
        }
        to_stdout_ = out_base.empty();
    }

    void write(const json& record) {
        if (writer_) writer_->write(record);
        if (to_stdout_) std::cout << canonical_json(record) << '\n';
    }

    bool wants_csv() const { return format_ != "jsonl"; }

private:
    std::unique_ptr<JsonlWriter> writer_;
    bool to_stdout_ = false;
    std::string format_;
};

json header_record(const std::string& command, json params) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "campaign"},
            {"command", command},
            {"params", std::move(params)}};
}

void write_meta(const std::string& out_base, const std::string& command, double wall_ms,
                int threads, const std::string& partial_error = "") {
    // Execution details (wall time, worker count) live in the sidecar so the
    // .jsonl payload is byte-identical across reruns and worker counts.
    json meta = {{"schema_version", kSchemaVersion},
                 {"kind", "meta"},
                 {"command", command},
                 {"wall_time_ms", wall_ms},
                 {"threads", threads}};
    if (!partial_error.empty()) {
        meta["partial"] = true;
        meta["error"] = partial_error;
    }
    if (out_base.empty()) {
        std::cerr << canonical_json(meta) << '\n';
        return;
    }
    JsonlWriter w(out_base + ".meta.json");
    w.write(meta);
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::int64_t trials = 1000;
    int threads = 0;
    std::string out;
    std::string format = "both";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "master seed; all randomness derives from it");
    cmd->add_option("--trials", opts.trials, "number of Monte Carlo trials");
    cmd->add_option("--threads", opts.threads, "worker count (0 = runtime default)");
    cmd->add_option("--out", opts.out, "output base path (writes <out>.jsonl / <out>.csv)");
    cmd->add_option("--format", opts.format, "jsonl, csv, or both")
        ->check(CLI::IsMember({"jsonl", "csv", "both"}));
}

struct ConstructionOpts {
    std::int64_t r = 512;
    std::int64_t n = 1024;
    double t = 1.0;
    double kappa_a = 10.0;
    double kappa_d = 1.0;
    std::string crossing = "2r";
};

void add_construction(CLI::App* cmd, ConstructionOpts& opts) {
    cmd->add_option("--r", opts.r, "construction scale r (>= 27)");
    cmd->add_option("--n", opts.n, "geodesic endpoint (n, n); n >= r");
    cmd->add_option("--t", opts.t, "construction deviation parameter t");
    cmd->add_option("--kappa-a", opts.kappa_a, "A-threshold coefficient");
    cmd->add_option("--kappa-d", opts.kappa_d, "D-threshold coefficient");
    cmd->add_option("--crossing", opts.crossing, "compare crossings at L_r or L_2r")
        ->check(CLI::IsMember({"r", "2r"}));
}

ConstructionConfig config_of(const ConstructionOpts& o) {
    ConstructionConfig cfg;
    cfg.kappa_a = o.kappa_a;
    cfg.kappa_d = o.kappa_d;
    cfg.crossing_at_2r = o.crossing == "2r";
    return cfg;
}

json construction_params(const ConstructionOpts& o, const CommonOpts& c) {
    return {{"r", o.r},      {"n", o.n},           {"t", o.t},
            {"kappa_a", o.kappa_a}, {"kappa_d", o.kappa_d}, {"crossing", o.crossing},
            {"seed", c.seed}, {"trials", c.trials}};
}

int run_tails(const CommonOpts& common, const std::string& stat_name, std::int64_t r,
              std::int64_t n, const std::string& grid_text, double confidence) {
    const auto start = std::chrono::steady_clock::now();
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::TailCurve;
    spec.stat = {parse_stat(stat_name), r, 0};
    spec.n = n;
    spec.r = r;
    spec.t_grid = parse_grid(grid_text);
    spec.trials = common.trials;
    spec.master_seed = common.seed;
    spec.workers = common.threads;
    spec.confidence = confidence;
    spec.validate();

    RecordSink sink(common.out, common.format);
    json params = {{"stat", stat_name},   {"r", r},
                   {"n", n},              {"t_grid", spec.t_grid},
                   {"trials", spec.trials}, {"seed", spec.master_seed},
                   {"confidence", confidence}, {"interval", "wilson"}};
    sink.write(header_record("tails", params));

    const std::vector<StatSample> samples = run_stat_trials(spec);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sink.write(stat_record(static_cast<std::int64_t>(i), samples[i]));
    }
    std::vector<double> values(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) values[i] = samples[i].normalized;
    const TailCurve curve = curve_from_samples(values, spec.t_grid, confidence);
    for (const TailCurveRow& row : curve.rows) sink.write(curve_row_record(row));

    for (const double beta : {3.0, 1.5}) {
        try {
            sink.write(fit_record(fit_tail_exponent(curve, beta), beta));
        } catch (const DomainError&) {
            // too few usable rows for this beta: no fit record
        }
    }

    if (!common.out.empty() && sink.wants_csv()) {
        write_tail_curve_csv(common.out + ".csv", curve);
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "tails", ms, common.threads);
    return kExitOk;
}

int run_exponents(const CommonOpts& common, const std::string& stat_name,
                  std::vector<std::int64_t> n_grid) {
    const auto start = std::chrono::steady_clock::now();
    ScalingKind kind;
    if (stat_name == "tf-global") {
        kind = ScalingKind::TfMedian;
    } else if (stat_name == "temporal-iqr") {
        kind = ScalingKind::TemporalIqr;
    } else {
        throw DomainError("exponents: --stat must be tf-global or temporal-iqr");
    }
    RecordSink sink(common.out, common.format);
    json params = {{"stat", stat_name},
                   {"n_grid", n_grid},
                   {"trials", common.trials},
                   {"seed", common.seed}};
    sink.write(header_record("exponents", params));

    const ScalingFitResult result =
        fit_scaling_exponent(kind, n_grid, common.trials, common.seed, common.threads);
    for (std::size_t i = 0; i < result.n_grid.size(); ++i) {
        sink.write({{"schema_version", kSchemaVersion},
                    {"kind", "scaling_level"},
                    {"payload", {{"n", result.n_grid[i]}, {"level", result.level_stats[i]}}}});
    }
    sink.write(fit_record(result.fit, 0.0));

    if (!common.out.empty() && sink.wants_csv()) {
        std::ofstream csv(common.out + ".csv");
        if (!csv) throw IoError("cannot open output file: " + common.out + ".csv");
        csv << "n,level\n";
        for (std::size_t i = 0; i < result.n_grid.size(); ++i) {
            csv << result.n_grid[i] << ',' << format_double(result.level_stats[i]) << '\n';
        }
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "exponents", ms, common.threads);
    return kExitOk;
}

int run_events(const CommonOpts& common, const ConstructionOpts& copts) {
    const auto start = std::chrono::steady_clock::now();
    const Construction c = build_construction(copts.r, copts.t, copts.n, config_of(copts));
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::EventTable;
    spec.r = copts.r;
    spec.n = copts.n;
    spec.t_construction = copts.t;
    spec.trials = common.trials;
    spec.master_seed = common.seed;
    spec.workers = common.threads;
    spec.validate();

    RecordSink sink(common.out, common.format);
    json params = construction_params(copts, common);
    params["u"] = {c.u.x, c.u.y};
    params["v"] = {c.v.x, c.v.y};
    sink.write(header_record("events", params));

    const std::vector<EventReport> reports = run_event_trials(spec, c);
    struct Tally {
        const char* name;
        std::int64_t count = 0;
    };
    Tally tallies[] = {{"A"}, {"B"}, {"C"}, {"D"}, {"E"}, {"E_prime"}, {"E_R"}};
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const EventReport& r = reports[i];
        sink.write(event_record(static_cast<std::int64_t>(i), r));
        const bool flags[] = {r.A, r.B, r.C, r.D, r.E, r.E_prime, r.E_R};
        for (std::size_t k = 0; k < 7; ++k) tallies[k].count += flags[k] ? 1 : 0;
    }
    for (const Tally& tl : tallies) {
        const auto est = estimate_probability(tl.count, spec.trials, 0.95);
        sink.write({{"schema_version", kSchemaVersion},
                    {"kind", "event_probability"},
                    {"payload",
                     {{"event", tl.name},
                      {"successes", tl.count},
                      {"trials", spec.trials},
                      {"p_hat", est.p_hat},
                      {"ci_low", est.ci_low},
                      {"ci_high", est.ci_high}}}});
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "events", ms, common.threads);
    return kExitOk;
}

int run_audit(const CommonOpts& common, const ConstructionOpts& copts, std::int64_t pairs) {
    const auto start = std::chrono::steady_clock::now();
    const Construction c = build_construction(copts.r, copts.t, copts.n, config_of(copts));
    CampaignSpec spec;
    spec.kind = CampaignSpec::Kind::AuditSuite;
    spec.r = copts.r;
    spec.n = copts.n;
    spec.t_construction = copts.t;
    spec.trials = common.trials;
    spec.master_seed = common.seed;
    spec.workers = common.threads;
    spec.validate();

    RecordSink sink(common.out, common.format);
    json params = construction_params(copts, common);
    params["pairs"] = pairs;
    sink.write(header_record("audit", params));

    std::int64_t violations = 0;
    const std::vector<AuditReport> reports = run_audit_trials(spec, c);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        sink.write(audit_record(static_cast<std::int64_t>(i), reports[i]));
        if (!reports[i].all_ok()) {
            ++violations;
            sink.write({{"schema_version", kSchemaVersion},
                        {"kind", "violation"},
                        {"trial_index", static_cast<std::int64_t>(i)},
                        {"payload", {{"what", "implication audit failed"}}}});
        }
    }
    if (pairs > 0) {
        const IndependenceReport ind = independence_audit(common.seed ^ 0x1d, c, pairs);
        sink.write({{"schema_version", kSchemaVersion},
                    {"kind", "independence"},
                    {"payload",
                     {{"pairs", ind.pairs},
                      {"inside_violations", ind.inside_violations},
                      {"outside_violations", ind.outside_violations}}}});
        if (!ind.ok()) ++violations;
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "audit", ms, common.threads);
    if (violations > 0) {
        std::cerr << "audit: " << violations << " violation(s)\n";
        return kExitViolation;
    }
    return kExitOk;
}

int run_lemma(const CommonOpts& common, const ConstructionOpts& copts, std::int64_t delta_inv) {
    const auto start = std::chrono::steady_clock::now();
    const Construction c = build_construction(copts.r, copts.t, copts.n, config_of(copts));
    RecordSink sink(common.out, common.format);
    json params = construction_params(copts, common);
    params["delta_inv"] = delta_inv;
    sink.write(header_record("lemma", params));

    std::int64_t violations = 0;
    for (std::int64_t i = 0; i < common.trials; ++i) {
        const WeightField field = derive_trial_field(common.seed, static_cast<std::uint64_t>(i));
        const PartitionReport rep = lemma_partition_report(field, c, delta_inv);
        json mids = json::array();
        for (const Point& p : rep.midpoints) mids.push_back({p.x, p.y});
        sink.write({{"schema_version", kSchemaVersion},
                    {"kind", "partition"},
                    {"trial_index", i},
                    {"payload",
                     {{"midpoints", mids},
                      {"segment_times", rep.segment_times},
                      {"segment_deviations", rep.segment_deviations},
                      {"segments_total", rep.segments_total},
                      {"constrained_uv", rep.constrained_uv},
                      {"superadditive_ok", rep.superadditive_ok}}}});
        if (!rep.superadditive_ok) ++violations;
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "lemma", ms, common.threads);
    return violations > 0 ? kExitViolation : kExitOk;
}

int run_oracle(const CommonOpts& common, std::int64_t instances) {
    const auto start = std::chrono::steady_clock::now();
    RecordSink sink(common.out, common.format);
    sink.write(header_record("oracle", {{"instances", instances}, {"seed", common.seed}}));
    const OracleOutcome out = oracle_suite(instances, common.seed);
    sink.write({{"schema_version", kSchemaVersion},
                {"kind", "oracle"},
                {"payload",
                 {{"instances", out.instances},
                  {"comparisons", out.comparisons},
                  {"mismatches", out.mismatches},
                  {"max_rel_err", out.max_rel_err},
                  {"first_failure", out.first_failure}}}});
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "oracle", ms, common.threads);
    if (out.mismatches > 0) {
        std::cerr << "oracle: " << out.mismatches << " mismatch(es); first: " << out.first_failure
                  << '\n';
        return kExitViolation;
    }
    return kExitOk;
}

int run_verify(const CommonOpts& common) {
    const auto start = std::chrono::steady_clock::now();
    RecordSink sink(common.out, common.format);
    sink.write(header_record("verify", {{"seed", common.seed}}));
    bool all_ok = true;

    const OracleOutcome oracle = oracle_suite(500, common.seed);
    all_ok = all_ok && oracle.mismatches == 0;
    std::cerr << (oracle.mismatches == 0 ? "[ ok ] " : "[FAIL] ") << "oracle: "
              << oracle.comparisons << " comparisons, max rel err " << oracle.max_rel_err << '\n';

    for (const CheckResult& check : verify_suite(common.seed)) {
        all_ok = all_ok && check.ok;
        std::cerr << (check.ok ? "[ ok ] " : "[FAIL] ") << check.name << ": " << check.detail
                  << '\n';
        sink.write({{"schema_version", kSchemaVersion},
                    {"kind", "check"},
                    {"payload",
                     {{"name", check.name}, {"ok", check.ok}, {"detail", check.detail}}}});
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    write_meta(common.out, "verify", ms, common.threads);
    return all_ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential last passage percolation laboratory"};
    app.require_subcommand(1);

    CommonOpts common;
    ConstructionOpts copts;
    std::string stat_name = "tf-local";
    std::string grid_text = "0.8:2.4:0.4";
    std::vector<std::int64_t> n_grid{128, 256, 512, 1024, 2048};
    double confidence = 0.95;
    std::int64_t pairs = 0;
    std::int64_t delta_inv = 4;
    std::int64_t instances = 500;
    std::int64_t stat_r = 256;
    std::int64_t stat_n = 1024;

    CLI::App* tails = app.add_subcommand("tails", "tail curve of a fluctuation statistic");
    add_common(tails, common);
    tails->add_option("--stat", stat_name,
                      "tf-local | tf-global | temporal-upper | temporal-lower");
    tails->add_option("--r", stat_r, "prefix scale r for tf-local");
    tails->add_option("--n", stat_n, "geodesic endpoint (n, n)");
    tails->add_option("--t", grid_text, "threshold grid start:stop:step");
    tails->add_option("--confidence", confidence, "confidence level for intervals");

    CLI::App* exponents = app.add_subcommand("exponents", "log-log scaling exponent fit");
    add_common(exponents, common);
    std::string exp_stat = "tf-global";
    exponents->add_option("--stat", exp_stat, "tf-global | temporal-iqr");
    exponents->add_option("--n-grid", n_grid, "endpoint grid (comma separated)")->delimiter(',');

    CLI::App* events = app.add_subcommand("events", "event table for a construction");
    add_common(events, common);
    add_construction(events, copts);

    CLI::App* audit = app.add_subcommand("audit", "implication and independence audits");
    add_common(audit, common);
    add_construction(audit, copts);
    audit->add_option("--pairs", pairs, "independence audit pairs (0 = skip)");

    CLI::App* lemma = app.add_subcommand("lemma", "rectangle partition report");
    add_common(lemma, common);
    add_construction(lemma, copts);
    lemma->add_option("--delta-inv", delta_inv, "number of partition segments");

    CLI::App* oracle = app.add_subcommand("oracle", "dynamic programs vs exhaustive enumeration");
    add_common(oracle, common);
    oracle->add_option("--instances", instances, "number of random instances");

    CLI::App* verify = app.add_subcommand("verify", "full oracle and invariant suite");
    add_common(verify, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    std::string command = "unknown";
    for (const CLI::App* sub :
         {tails, exponents, events, audit, lemma, oracle, verify}) {
        if (sub->parsed()) command = sub->get_name();
    }

    try {
        if (tails->parsed()) return run_tails(common, stat_name, stat_r, stat_n, grid_text,
                                              confidence);
        if (exponents->parsed()) return run_exponents(common, exp_stat, n_grid);
        if (events->parsed()) return run_events(common, copts);
        if (audit->parsed()) return run_audit(common, copts, pairs);
        if (lemma->parsed()) return run_lemma(common, copts, delta_inv);
        if (oracle->parsed()) return run_oracle(common, instances);
        if (verify->parsed()) return run_verify(common);
    } catch (const CampaignAborted& e) {
        std::cerr << "error: " << e.what() << '\n';
        try {
            write_meta(common.out, command, 0.0, common.threads, e.what());
        } catch (...) {
        }
        return kExitValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
