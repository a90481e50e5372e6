#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wbrm/banded.hpp"
#include "wbrm/spectrum.hpp"
#include "wbrm/wbrm_model.hpp"

namespace wbrm {

inline constexpr double kEpsGuard = 1e-12;  // resonance guard on |E - E0_k|
inline constexpr double kPivotTau = 1e-12;  // pivot failure threshold

enum class NptMethod { oracle, iterative, recursion };
const char* npt_method_name(NptMethod m);

/// Non-perturbative region [p1, p2] of a perturbed state, with the b-wide
/// shoulder intervals on each side (clipped to [1, n]).
struct NptRegion {
    int p1 = 0;
    int p2 = 0;
    std::pair<int, int> shoulder_lo{0, 0};
    std::pair<int, int> shoulder_hi{0, 0};
    NptMethod method = NptMethod::oracle;

    int width() const { return p2 - p1; }
};

NptRegion make_region(int p1, int p2, int n, int b, NptMethod method);

/// Dense convergence-test matrix over the levels outside [p1, p2]:
/// U_ij = lambda*V_ij / (e - E0_i), zero for |i-j| > b.
struct UMatrix {
    Eigen::MatrixXd m;
    std::vector<int> levels;  // global level of each row/column, ascending
};

UMatrix build_u(const WbrmInstance& inst, double e_alpha, int p1, int p2);

/// Symmetric similarity transforms of the U blocks below/above e_alpha:
/// s_p spans levels 1..floor(e), s_n spans floor(e)+1..n (stored 1-based
/// locally), with (S)_ij = lambda*V_ij / sqrt(|e-i||e-j|).
struct SMatrices {
    BandedSymmetricMatrix s_p;
    BandedSymmetricMatrix s_n;
    int k0 = 0;  // floor(e_alpha); s_n local row r is global k0 + r
};

SMatrices build_s_matrices(const WbrmInstance& inst, double e_alpha);

/// I + sign*S.
BandedSymmetricMatrix shifted_identity(const BandedSymmetricMatrix& s, double sign);

enum class ScanDirection { top_down, bottom_up };

/// Banded symmetric Gaussian elimination tracking the diagonal pivots.
/// fail_index is the first row (in the matrix's own numbering) whose pivot
/// is <= tau, or 0 if every pivot stays positive. pivots holds the pivot
/// sequence in scan order up to and including the failing one.
struct ScanResult {
    int fail_index = 0;
    std::vector<double> pivots;
};

ScanResult pivot_scan(const BandedSymmetricMatrix& m, ScanDirection direction,
                      double tau = kPivotTau, bool collect_pivots = false);

/// pivot_scan of I + sign*S without materializing the shifted matrix.
ScanResult pivot_scan_shifted(const BandedSymmetricMatrix& s, double sign,
                              ScanDirection direction, double tau = kPivotTau,
                              bool collect_pivots = false);

/// Brute-force method: smallest interval [p1, p2] bracketing e_alpha with
/// spectral radius of U below one, found by eigensolves independent of the
/// pivot elimination.
NptRegion npt_oracle(const WbrmInstance& inst, double e_alpha);

/// Pivot-scan method; falls back to the oracle when the resulting width
/// is <= b (the elimination is only valid for widths beyond the band).
NptRegion npt_iterative(const WbrmInstance& inst, double e_alpha);

/// b=1 pivot recursion y_{i+1} = 1 - xi_i^2 / y_i, y_1 = 1, stopping at the
/// first y <= tau; degenerate_at flags |y| < tau (treated as a failure).
struct RecursionResult {
    std::vector<double> y;
    int stop_index = 0;  // 0 = ran to the end
    std::optional<int> degenerate_at;
};

RecursionResult recursion_b1(const std::vector<double>& xi, double tau = kPivotTau);

/// b=1 path-summation sequence g(1)=0, g(j+1) = xi_j^2 / (1 - g(j)) over the
/// levels below e_alpha; satisfies y_i = 1 - g(i).
struct PathSummation {
    std::vector<double> g;
    std::optional<int> degenerate_at;  // where |1 - g| < tau stopped the recursion
};

PathSummation path_summation_g(const WbrmInstance& inst, double e_alpha, int j_max,
                               double tau = kPivotTau);

/// Re-evaluates the spectral radius of U at a returned region (decoupled
/// blocks via the symmetric transform when width >= b, full U otherwise).
double region_spectral_radius(const WbrmInstance& inst, double e_alpha, const NptRegion& region);

/// "alpha,e_alpha,p1,p2,width,method" line for streaming per-state results.
std::string npt_csv_row(int alpha, double e_alpha, const NptRegion& region);

}  // namespace wbrm
