#pragma once

#include "chenrecip/scene.hpp"

#include <string>
#include <utility>
#include <vector>

namespace chenrecip {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckResult {
    std::string name;
    bool passed = false;
    double defect = 0.0;
    double tolerance = 0.0;
    std::string error;  // set when the check raised instead of producing a defect
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;  // in emission order
};

struct Report {
    std::string tool_version = kToolVersion;
    std::string scene;
    int truncation = 0;
    double transport_tolerance = 0.0;
    std::vector<CheckResult> checks;  // in request order

    bool passed() const;
};

/// Runs each check concurrently and merges the results in request order.
/// Errors raised inside a check are recorded on that check only.
Report run_checks(const SceneSpec& spec, const std::vector<std::string>& checks);
CheckResult run_check(const SceneSpec& spec, const std::string& check);

enum class ReportFormat { Text, Json };

std::string emit_report(const Report& report, ReportFormat format);
Report report_from_json(const std::string& text);

/// 0 all pass, 1 any failure.
int exit_code(const Report& report);

}  // namespace chenrecip
