#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lpplab/construction.hpp"
#include "lpplab/montecarlo.hpp"

namespace lpplab {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kTailCurveCsvHeader = "t,successes,trials,p_hat,ci_low,ci_high";

/// I/O failures (maps to CLI exit 4).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonical serialization: keys in sorted order, floats with 17 significant
/// digits so values round-trip exactly, no insignificant whitespace.
std::string canonical_json(const nlohmann::json& value);

std::string format_double(double v);

/// Line-per-record writer producing canonical JSONL.
class JsonlWriter {
public:
    explicit JsonlWriter(const std::string& path);

    void write(const nlohmann::json& record);

private:
    std::ofstream out_;
    std::string path_;
};

/// Parses a single JSONL record, rejecting records whose schema major version
/// this reader does not understand.
nlohmann::json parse_record(const std::string& line);

nlohmann::json curve_row_record(const TailCurveRow& row);
nlohmann::json fit_record(const FitResult& fit, double beta);
nlohmann::json event_record(std::int64_t trial, const EventReport& report);
nlohmann::json audit_record(std::int64_t trial, const AuditReport& report);
nlohmann::json stat_record(std::int64_t trial, const StatSample& sample);

void write_tail_curve_csv(const std::string& path, const TailCurve& curve);

}  // namespace lpplab
