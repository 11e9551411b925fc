#pragma once

#include "zigzag/hill.hpp"

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

namespace zigzag {

struct CheckResult {
    std::string id;
    std::string title;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240607;
    ScanOptions scan{};
};

struct Check {
    std::string id;
    std::function<CheckResult(const VerifyOptions&)> run;
};

// The acceptance criteria (ids "1".."10") followed by supplementary checks.
const std::vector<Check>& acceptance_checks();
std::vector<CheckResult> run_checks(const VerifyOptions& opt, const std::vector<std::string>& only = {});

std::string format_check_line(const CheckResult& r);
nlohmann::json to_json(const std::vector<CheckResult>& results, const VerifyOptions& opt);

} // namespace zigzag
