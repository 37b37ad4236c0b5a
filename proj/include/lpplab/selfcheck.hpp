#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lpplab {

struct OracleOutcome {
    std::int64_t instances = 0;
    std::int64_t comparisons = 0;
    std::int64_t mismatches = 0;
    double max_rel_err = 0.0;
    std::string first_failure;
};

/// Random small instances (box sides <= 8, random rectangular constraints and
/// discount regions): dynamic programs vs exhaustive enumeration, times to
/// 1e-9 relative and argmax paths vertex for vertex.
OracleOutcome oracle_suite(std::int64_t instances, std::uint64_t seed);

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Fast battery of the module invariants: generator distribution and purity,
/// discount locality, hybrid boundaries, superadditivity, constraint
/// monotonicity, parallel determinism, interval estimates.
std::vector<CheckResult> verify_suite(std::uint64_t seed);

}  // namespace lpplab
