#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wbrm/config.hpp"
#include "wbrm/npt.hpp"
#include "wbrm/shapes.hpp"
#include "wbrm/theory.hpp"

namespace wbrm {

/// Seed for realization ir of grid point il, derived from the master seed.
std::uint64_t derived_seed(std::uint64_t master, int lambda_index, int realization_index);

/// Deterministic choice of eigenstate indices: the middle window, capped by a
/// seeded subset when larger than cap.
std::vector<int> select_states(int n, double lo_frac, double hi_frac, int cap, std::uint64_t seed);

struct EnsembleRecord {
    double lambda = 0.0;
    double mean_np = 0.0;
    double std_np = 0.0;
    double w_l = 0.0;
    double w_f = 0.0;
    double l_mean = 0.0;
    double eta = 0.0;
    int realizations = 0;
    int states = 0;
    int skipped = 0;
};

struct ConfirmRow {
    double lambda = 0.0;
    int alpha = 0;
    double e_alpha = 0.0;
    NptRegion oracle;
    NptRegion iterative;
    bool comparable = true;  // false when the oracle legitimately erred
    bool match = false;
};

struct ConfirmResult {
    std::vector<ConfirmRow> rows;
    long mismatches = 0;        // disagreements with iterative width > b
    long fallback_states = 0;   // iterative returned through the oracle path
    long oracle_errors = 0;     // oracle exceeded its width cap
    long skipped = 0;
};

ConfirmResult run_confirm(const SweepConfig& cfg, int workers = 0);

struct SweepPoint {
    double lambda = 0.0;
    double mean_np = 0.0;
    double std_np = 0.0;
    int n_used = 0;
    int states = 0;
    int skipped = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::optional<FitResult> small_fit;     // erfc law on the small window
    std::optional<FitResult> linear_fit;    // mean_np vs lambda
    std::optional<FitResult> loglarge_fit;  // mean_np/lambda vs sqrt(ln lambda)
};

SweepResult run_sweep(const SweepConfig& cfg, int workers = 0);

struct CompareResult {
    std::vector<EnsembleRecord> records;
    std::vector<ShapeProfile> ef_profiles;    // one per lambda
    std::vector<ShapeProfile> ldos_profiles;  // one per lambda
};

CompareResult run_compare(const SweepConfig& cfg, int workers = 0);

struct TailFit {
    int b = 0;
    double slope = 0.0;  // of log h vs t^2 (negative in the Gaussian tail)
    double r2 = 0.0;
};

struct PnCurve {
    int b = 0;
    double lambda = 0.0;
    std::vector<double> n;
    std::vector<double> p;
    double n_c = 0.0;
    double sum_np = 0.0;
};

struct DistResult {
    std::vector<double> x_samples;
    FitResult x_fit;             // params {C, beta}
    double x_ks = 1.0;           // KS distance on X >= 1 vs the fitted model
    std::vector<Histogram> h_hists;  // per dist_b_values entry
    std::vector<EmpiricalCdf> h_cdfs;
    std::vector<TailFit> tail_fits;
    std::vector<PnCurve> pn_curves;
    std::vector<double> su_errors;  // |s(U) - max_i s(M_i)| samples, b = 1
};

DistResult run_distributions(const SweepConfig& cfg, int workers = 0);

/// KS distance between samples (restricted to x >= 1) and the fitted
/// conditional model CDF.
double ks_distance_px(const std::vector<double>& samples, double beta);

/// Write results + metadata sidecar into cfg.output_dir.
void write_confirm(const SweepConfig& cfg, const ConfirmResult& r, double elapsed_s);
void write_sweep(const SweepConfig& cfg, const SweepResult& r, double elapsed_s);
void write_compare(const SweepConfig& cfg, const CompareResult& r, double elapsed_s);
void write_distributions(const SweepConfig& cfg, const DistResult& r, double elapsed_s);

}  // namespace wbrm
