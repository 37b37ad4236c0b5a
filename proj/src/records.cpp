#include "lpplab/records.hpp"

#include <cstdio>

namespace lpplab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
    out.push_back('"');
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out.push_back(ch);
                }
        }
    }
    out.push_back('"');
}

void dump(const nlohmann::json& v, std::string& out) {
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {  // keys iterate sorted
                if (!first) out.push_back(',');
                first = false;
                escape_string(it.key(), out);
                out.push_back(':');
                dump(it.value(), out);
            }
            out.push_back('}');
            break;
        }
        case nlohmann::json::value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : v) {
                if (!first) out.push_back(',');
                first = false;
                dump(item, out);
            }
            out.push_back(']');
            break;
        }
        case nlohmann::json::value_t::string:
            escape_string(v.get_ref<const std::string&>(), out);
            break;
        case nlohmann::json::value_t::number_float:
            out += format_double(v.get<double>());
            break;
        case nlohmann::json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            break;
        case nlohmann::json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            break;
        case nlohmann::json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        default:
            out += "null";
    }
}

nlohmann::json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string canonical_json(const nlohmann::json& value) {
    std::string out;
    dump(value, out);
    return out;
}

nlohmann::json parse_record(const std::string& line) {
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed record: ") + e.what());
    }
    if (!rec.contains("schema_version") || !rec["schema_version"].is_string()) {
        throw IoError("record lacks a schema_version");
    }
    const std::string version = rec["schema_version"].get<std::string>();
    const std::string major = version.substr(0, version.find('.'));
    const std::string expected(kSchemaVersion);
    if (major != expected.substr(0, expected.find('.'))) {
        throw IoError("unsupported schema major version: " + version);
    }
    return rec;
}

JsonlWriter::JsonlWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw IoError("cannot open output file: " + path);
}

void JsonlWriter::write(const nlohmann::json& record) {
    out_ << canonical_json(record) << '\n';
    if (!out_) throw IoError("write failed: " + path_);
}

nlohmann::json curve_row_record(const TailCurveRow& row) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "curve_row"},
            {"payload",
             {{"t", row.t},
              {"successes", row.successes},
              {"trials", row.trials},
              {"p_hat", row.p_hat},
              {"ci_low", row.ci_low},
              {"ci_high", row.ci_high}}}};
}

nlohmann::json fit_record(const FitResult& fit, double beta) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "fit"},
            {"payload",
             {{"model", fit.model},
              {"beta", beta},
              {"a", fit.intercept},
              {"c", fit.coefficient},
              {"r_squared", fit.r_squared},
              {"points_used", static_cast<std::int64_t>(fit.points_used)},
              {"residuals", fit.residuals}}}};
}

nlohmann::json event_record(std::int64_t trial, const EventReport& r) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "events"},
            {"trial_index", trial},
            {"payload",
             {{"A", r.A},
              {"B", r.B},
              {"C", r.C},
              {"D", r.D},
              {"E", r.E},
              {"E_prime", r.E_prime},
              {"E_R", r.E_R},
              {"constrained_uv_R", opt_json(r.constrained_uv_R)},
              {"passage_o_u", opt_json(r.passage_o_u)},
              {"passage_v_r", opt_json(r.passage_v_r)},
              {"constrained_o_r_S", opt_json(r.constrained_o_r_S)},
              {"concat_time", opt_json(r.concat_time)},
              {"psi_crossing_n", r.psi_crossing_n},
              {"psi_crossing_R", r.psi_crossing_R},
              {"gamma_n_below_R", r.gamma_n_below_R},
              {"gamma_R_below_R", r.gamma_R_below_R},
              {"tf_r", r.tf_r},
              {"tf_n", r.tf_n}}}};
}

nlohmann::json audit_record(std::int64_t trial, const AuditReport& a) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "audit"},
            {"trial_index", trial},
            {"payload",
             {{"concat_defined", a.concat_defined},
              {"antecedent_i", a.antecedent_i},
              {"implication_i_ok", a.implication_i_ok},
              {"superadditivity_ok", a.superadditivity_ok},
              {"ordering_ok", a.ordering_ok},
              {"implication_ii_ok", a.implication_ii_ok},
              {"nesting_ok", a.nesting_ok},
              {"passage_o_r", a.passage_o_r},
              {"concat_time", opt_json(a.events.concat_time)},
              {"constrained_o_r_S", opt_json(a.events.constrained_o_r_S)},
              {"tf_r", a.events.tf_r},
              {"tf_n", a.events.tf_n},
              {"E", a.events.E},
              {"E_prime", a.events.E_prime},
              {"E_R", a.events.E_R}}}};
}

nlohmann::json stat_record(std::int64_t trial, const StatSample& sample) {
    return {{"schema_version", kSchemaVersion},
            {"kind", "trial"},
            {"trial_index", trial},
            {"payload", {{"normalized", sample.normalized}, {"raw", sample.raw}}}};
}

void write_tail_curve_csv(const std::string& path, const TailCurve& curve) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << kTailCurveCsvHeader << '\n';
    for (const TailCurveRow& row : curve.rows) {
        out << format_double(row.t) << ',' << row.successes << ',' << row.trials << ','
            << format_double(row.p_hat) << ',' << format_double(row.ci_low) << ','
            << format_double(row.ci_high) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace lpplab
