#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wbrm/spectrum.hpp"

namespace wbrm {

enum class ProfileKind { ef, ldos };

/// Averaged intensity profile versus energy offset, binned at the level
/// spacing. Bin c covers [c*h - h/2, c*h + h/2); exact first and second
/// moments are tracked before binning.
struct ShapeProfile {
    double bin_width = 1.0;
    std::map<int, double> bins;  // bin index -> mean intensity per state
    long count = 0;              // states averaged
    ProfileKind kind = ProfileKind::ef;
    double moment1 = 0.0;  // exact mean of epsilon over the averaged states
    double moment2 = 0.0;  // exact mean of epsilon^2

    double total_intensity() const;
};

/// Mergeable accumulator so ensembles can be binned in parallel and reduced.
class ShapeAccumulator {
  public:
    explicit ShapeAccumulator(ProfileKind kind, double bin_width = 1.0)
        : kind_(kind), bin_width_(bin_width) {}

    /// One state's weights |C|^2 at offsets epsilon (must sum to ~1).
    void add_state(const Eigen::VectorXd& weights, const Eigen::VectorXd& epsilons);
    void merge(const ShapeAccumulator& other);
    ShapeProfile profile() const;
    long count() const { return count_; }

  private:
    ProfileKind kind_;
    double bin_width_;
    std::map<int, double> sums_;
    long count_ = 0;
    double moment1_sum_ = 0.0;
    double moment2_sum_ = 0.0;
};

/// Selects the middle fraction of the index range [1, n] (by sorted position).
struct SpectralWindow {
    double lo_frac = 0.25;
    double hi_frac = 0.75;

    int first(int n) const;
    int last(int n) const;
    bool contains(int index, int n) const;
};

/// Average EF shape: for each filtered eigenstate alpha, |C_{alpha k}|^2
/// accumulated at epsilon = E_alpha - E0_k.
ShapeProfile averaged_ef_shape(const std::vector<const SpectrumResult*>& ensemble,
                               const SpectralWindow& filter, double bin_width = 1.0);

/// Averaged LDOS: roles of alpha and k exchanged, same epsilon variable.
ShapeProfile averaged_ldos_shape(const std::vector<const SpectrumResult*>& ensemble,
                                 const SpectralWindow& filter, double bin_width = 1.0);

/// Full width at half maximum with linear interpolation between bins.
double half_width(const ShapeProfile& p);

/// Mirror average I(eps) -> (I(eps) + I(-eps))/2. The ensemble shapes are
/// symmetric in distribution, so this halves estimator variance without bias.
ShapeProfile mirror_symmetrized(const ShapeProfile& p);

/// Inverse participation ratio of a normalized component row.
double localization_length(const Eigen::VectorXd& components_row);

/// Shoulder-fill factor in w_L ~ N_p + 2*eta*b.
double eta(double w_l, double np_mean, int b);

struct WidthReport {
    double w_f = 0.0;
    double w_l = 0.0;
    double np_mean = 0.0;
    double l_mean = 0.0;
    double eta = 0.0;
};

std::string width_report_to_json(double lambda, const WidthReport& r);

/// Two-column CSV (epsilon_bin_center, intensity), header row included.
std::string profile_to_csv(const ShapeProfile& p);

}  // namespace wbrm
