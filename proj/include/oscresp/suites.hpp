// suites.hpp - named verification suites and their JSON reports

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscresp/kernels.hpp"

namespace oscresp {

inline constexpr int report_schema_version = 1;

struct SuiteConfig {
    OscillatorParams params{1.0, 1.0, 1.0};
    std::size_t n{256};
    std::size_t bin{8};
    std::size_t dim{40};
    std::uint64_t seed{7};
    // Grid of the classical-dynamics checks.
    std::size_t drive_n{2048};
    double drive_dt{0.005};
    // Per-check tolerance overrides, keyed by check id.
    std::map<std::string, double> tolerances;
};

SuiteConfig default_config();
// Throws std::invalid_argument on unknown keys or bad values.
SuiteConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SuiteConfig& c);

struct CheckRow {
    std::string check_id;
    std::string paper_eq;
    double residual{0.0};
    double tolerance{0.0};
    bool pass{false};
    bool gating{true};
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckRow> rows;
    double wall_time_s{0.0};
    nlohmann::json config;
    int schema_version{report_schema_version};

    bool all_gating_pass() const;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Checks inside a suite run concurrently; row order is fixed.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

nlohmann::json report_to_json(const SuiteReport& r);
SuiteReport report_from_json(const nlohmann::json& j);
// Fixed-width table of the rows.
std::string format_table(const SuiteReport& r);

}  // namespace oscresp
