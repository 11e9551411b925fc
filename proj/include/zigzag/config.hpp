#pragma once

#include "zigzag/errors.hpp"
#include "zigzag/hill.hpp"
#include "zigzag/potential.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zigzag {

// Bad config file or flag; the CLI maps it to exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

struct FieldSweep {
    double min = 0.0, max = 0.0;
    int steps = 1;
    std::vector<double> grid() const;
};

struct EigenRequest {
    std::string kind = "dirichlet"; // or "antiperiodic"
    int k = 0;
    int index = 1;                  // 1-based position in sigma_D (resp. sigma_AP) inside the window
    int translate = 0;
};

struct RunConfig {
    Potential potential = Potential::zero();
    int N = 3;
    std::optional<double> B; // exactly one of B, a; B = 0 when neither is given
    std::optional<double> a;
    double lambda_max = 100.0;
    std::optional<double> lambda_min;
    std::vector<int> channels; // empty: all
    std::optional<FieldSweep> b_sweep;
    std::string out = "out";
    ScanOptions scan{};
    std::uint64_t seed = 20240607;
    int lambda_points = 2001;
    EigenRequest eigenfunction{};

    double flux() const;
    double field() const; // B, or the field giving flux a
    Window window() const;
    std::vector<int> channel_list() const;
};

// base_dir resolves a relative potential_file.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

FieldSweep parse_field_spec(const std::string& spec); // "X" or "MIN:MAX:STEPS"
std::vector<int> parse_channel_list(const std::string& spec); // "0,2,5"

void validate(const RunConfig& c);

} // namespace zigzag
