#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace wbrm {

/// Symmetric banded matrix stored as diagonal plus upper bands.
///
/// Rows and columns are addressed 1-based to match the level numbering
/// E0_k = k used throughout; band d holds elements (i, i+d).
class BandedSymmetricMatrix {
  public:
    BandedSymmetricMatrix() = default;
    BandedSymmetricMatrix(int n, int b);

    int dim() const { return n_; }
    int half_bandwidth() const { return b_; }

    double& diag(int i) { return diag_[static_cast<std::size_t>(i - 1)]; }
    double diag(int i) const { return diag_[static_cast<std::size_t>(i - 1)]; }

    /// Band element coupling rows i and i+d, 1 <= d <= b, 1 <= i <= n-d.
    double& band(int d, int i) { return off_[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(i - 1)]; }
    double band(int d, int i) const { return off_[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(i - 1)]; }

    /// General accessor; returns 0 outside the band.
    double at(int i, int j) const;
    void set(int i, int j, double value);

    Eigen::MatrixXd dense() const;
    static BandedSymmetricMatrix from_dense(const Eigen::MatrixXd& m, int b);

    /// Principal submatrix over rows 1..k.
    BandedSymmetricMatrix leading_block(int k) const;
    /// Principal submatrix over rows k..n.
    BandedSymmetricMatrix trailing_block(int k) const;
    /// Same matrix with index order reversed (i -> n+1-i).
    BandedSymmetricMatrix reversed() const;

    /// FNV-1a over the band payload; used to fingerprint failing solves.
    std::uint64_t fingerprint() const;

  private:
    int n_ = 0;
    int b_ = 0;
    std::vector<double> diag_;
    std::vector<std::vector<double>> off_;  // off_[d-1][i-1] couples i and i+d
};

}  // namespace wbrm
