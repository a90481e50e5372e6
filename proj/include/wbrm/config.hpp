#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wbrm {

/// Shared configuration for the ensemble experiments. Parsed from a
/// sectioned key=value file; every key mirrors a field name below and
/// unknown keys are rejected.
struct SweepConfig {
    int n = 500;
    int b = 1;
    std::vector<double> lambda_grid;
    int realizations = 1;
    std::uint64_t master_seed = 1;

    // state filter
    double window_lo = 0.25;
    double window_hi = 0.75;
    int state_cap = 100;

    std::string output_dir = "out";
    int dense_limit = 4000;

    /// Grow the matrix with lambda so wide regions stay in the interior.
    bool adaptive_n = false;

    // fit windows (lambda ranges)
    double small_fit_lo = 0.2;
    double small_fit_hi = 2.0;
    double linear_fit_lo = 9.0;
    double linear_fit_hi = 30.0;
    double loglarge_fit_lo = 50.0;
    double loglarge_fit_hi = 500.0;

    // distribution experiment controls
    std::vector<double> dist_b_values{1, 8};
    std::vector<double> dist_lambdas{20.0, 100.0};
    long x_samples = 200000;
    long h_trials = 100000;

    /// Matrix size actually used at a given lambda.
    int effective_n(double lambda) const;
};

SweepConfig parse_config_text(const std::string& text);
SweepConfig parse_config_file(const std::string& path);

std::string config_to_json(const SweepConfig& cfg);

}  // namespace wbrm
