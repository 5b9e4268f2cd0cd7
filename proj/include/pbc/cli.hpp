#pragma once

#include <optional>
#include <string>

#include "pbc/io.hpp"

namespace pbc {

struct CheckResult {
    std::string name;
    Status status = Status::unknown;
    std::string detail;
    std::string witness;
};

struct SuiteOptions {
    int max_n = 3;    // segal
    int max_dim = 2;  // weiss, main-theorem, map-space nerve
    int dim = 2;      // homology
    std::string from, to;
    std::string z1, z2;
    std::uint64_t budget = default_budget();
    bool timing = false;
};

struct SuiteReport {
    std::string suite;
    std::string fixture;
    std::string fixture_hash;
    std::vector<CheckResult> checks;
    std::uint64_t work_units = 0;
    std::optional<double> seconds;

    Status status() const;
};

/// Suites: validate, segal, weiss, homology, main-theorem, map-space, compose.
/// Throws BudgetExceeded when the search budget runs out.
SuiteReport run_suite(const SpecFile& spec, const std::string& suite, const SuiteOptions& options);

std::string emit_report(const SuiteReport& report, const std::string& format);

/// 0 for pass or unknown only, 1 if any check failed.
int exit_code(const SuiteReport& report);

/// Targets: "carrier", "level:N", "cn:N:OBJECT", "map:X,Y".
std::string export_dot(const SpecFile& spec, const std::string& target, const SuiteOptions& options);

}  // namespace pbc
