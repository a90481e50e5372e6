#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wbrm {

/// Coefficients of the reduced eigenvalue condition mu^4 - A*mu^2 + B = 0
/// for the five-level matrix just below the target energy (b = 1 geometry,
/// f = e_alpha - p1 + 1).
struct QuarticCoeffs {
    double a = 0.0;
    double b = 0.0;
    double f = 0.0;
    double lambda = 0.0;
    std::array<double, 4> v{};
};

QuarticCoeffs quartic_coeffs(const std::array<double, 4>& v, double f, double lambda);

/// Largest eigenvalue modulus sqrt((A + sqrt(A^2-4B))/2).
double quartic_s(const QuarticCoeffs& q);

/// Equivalent threshold condition for s > 1: A > 2 or A > B + 1.
bool quartic_exceeds_one(const QuarticCoeffs& q);

/// The explicit 5x5 matrix whose spectrum the quartic describes.
Eigen::MatrixXd assemble_u_up(const std::array<double, 4>& v, double f, double lambda);

/// X = A / lambda^2; the width-1 region survives while X < 1/lambda^2.
double x_statistic(const std::array<double, 4>& v, double f);
double x_max(const std::array<double, 4>& v_up, const std::array<double, 4>& v_down, double f);

/// Monte Carlo draws of X = max(X_up(f), X_down(3-f)) with f = 1 + U(0,1).
std::vector<double> sample_x(std::size_t count, std::uint64_t seed);

/// Complementary error function via power series below 2 and a continued
/// fraction above; absolute accuracy better than 1e-10.
double erfc_cf(double x);

struct FitResult {
    std::string model;
    std::vector<double> params;
    double r2 = 0.0;
    std::size_t n_points = 0;
    double residual_norm = 0.0;

    std::string to_json() const;
};

/// Fit p(X) = C X^{-1/2} e^{-beta X} on X >= 1 by least squares on the log
/// histogram; C is then pinned by the empirical mass on [1, inf).
/// params = {C, beta}. Requires >= 1e4 samples.
FitResult fit_px(const std::vector<double>& samples);

/// Mean NPT width in the weak-perturbation law
/// 1 + C sqrt(pi/beta) erfc(sqrt(beta)/lambda).
double mean_np_small(double lambda, double c, double beta);

/// CDF of the model p(X) restricted to [1, inf), for KS checks.
double px_model_cdf(double x, double beta);

/// Empirical CDF with a precomputed tail integral of ln H (trapezoid on the
/// sample grid, ln clamped at ln(1e-300) below the support).
class EmpiricalCdf {
  public:
    static EmpiricalCdf from_samples(std::vector<double> samples);

    double eval(double t) const;
    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    /// Integral of ln H from x to the top of the support.
    double tail_log_integral(double x) const;

  private:
    std::vector<double> values_;
    std::vector<double> suffix_;  // suffix_[i] = integral from values_[i]
};

/// Monte Carlo spectral-radius distribution of the m-dimensional standard
/// matrix (symmetric banded standard normals, zero diagonal).
EmpiricalCdf standard_matrix_h(int m, int b, std::size_t trials, std::uint64_t seed);

/// Default truncation dimension for the standard matrix.
int standard_matrix_dim(int b);

/// Probability that a width-n interval fails the convergence test:
/// P(n) = 1 - exp( lambda/(m-1) * integral_{n/2lambda}^inf ln H ).
double p_n(double n, double lambda, int m, const EmpiricalCdf& h);

/// Ladder sum of P(n) and the half-crossing point n_c (P(n_c) = 1/2).
struct LadderResult {
    double sum_np = 0.0;
    double n_c = 0.0;
};

LadderResult mean_np_ladder(double lambda, int m, const EmpiricalCdf& h);

/// Strong-perturbation law C' * lambda * sqrt(ln lambda); rejects lambda <= 1.
double mean_np_large(double lambda, double c_prime);

/// Integral of ln H over [x, inf) (same quadrature as p_n uses).
double tail_integral(const EmpiricalCdf& h, double x);

enum class FitModel {
    linear,          // y = p0 + p1 * x
    erfc_np,         // y = 1 + C sqrt(pi/beta) erfc(sqrt(beta)/x), params {C, beta}
    sqrtlog_linear,  // y = p0 + p1 * sqrt(ln x)
};

/// Least squares: closed form for the linear models, coarse grid search plus
/// Nelder-Mead refinement for the rest.
FitResult fit_curve(FitModel model, const std::vector<std::pair<double, double>>& points);

/// Simple density histogram (integrates to 1): centers and density values.
struct Histogram {
    std::vector<double> centers;
    std::vector<double> density;
    std::vector<std::size_t> counts;
    double bin_width = 0.0;
};

Histogram make_histogram(const std::vector<double>& samples, int bins, double lo, double hi);

/// Ordinary least squares y = a + b x; returns {a, b, r2}.
std::array<double, 3> linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace wbrm
