#include "wbrm/banded.hpp"

#include <cmath>
#include <cstdlib>

#include "wbrm/errors.hpp"

namespace wbrm {

BandedSymmetricMatrix::BandedSymmetricMatrix(int n, int b) : n_(n), b_(b) {
    if (n < 1 || b < 0) throw ValidationError("banded matrix: need n >= 1 and b >= 0");
    diag_.assign(static_cast<std::size_t>(n), 0.0);
    off_.resize(static_cast<std::size_t>(b));
    for (int d = 1; d <= b; ++d) {
        const int len = n - d > 0 ? n - d : 0;
        off_[static_cast<std::size_t>(d - 1)].assign(static_cast<std::size_t>(len), 0.0);
    }
}

double BandedSymmetricMatrix::at(int i, int j) const {
    if (i == j) return diag(i);
    const int d = std::abs(i - j);
    if (d > b_) return 0.0;
    return band(d, i < j ? i : j);
}

void BandedSymmetricMatrix::set(int i, int j, double value) {
    if (i == j) {
        diag(i) = value;
        return;
    }
    const int d = std::abs(i - j);
    if (d > b_) throw ValidationError("banded matrix: element outside the band");
    band(d, i < j ? i : j) = value;
}

Eigen::MatrixXd BandedSymmetricMatrix::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 1; i <= n_; ++i) m(i - 1, i - 1) = diag(i);
    for (int d = 1; d <= b_; ++d)
        for (int i = 1; i <= n_ - d; ++i) {
            const double v = band(d, i);
            m(i - 1, i + d - 1) = v;
            m(i + d - 1, i - 1) = v;
        }
    return m;
}

BandedSymmetricMatrix BandedSymmetricMatrix::from_dense(const Eigen::MatrixXd& m, int b) {
    const int n = static_cast<int>(m.rows());
    BandedSymmetricMatrix out(n, b);
    for (int i = 1; i <= n; ++i) out.diag(i) = m(i - 1, i - 1);
    for (int d = 1; d <= b; ++d)
        for (int i = 1; i <= n - d; ++i) out.band(d, i) = m(i - 1, i + d - 1);
    return out;
}

BandedSymmetricMatrix BandedSymmetricMatrix::leading_block(int k) const {
    BandedSymmetricMatrix out(k, b_ < k - 1 ? b_ : (k > 1 ? k - 1 : 0));
    for (int i = 1; i <= k; ++i) out.diag(i) = diag(i);
    for (int d = 1; d <= out.b_; ++d)
        for (int i = 1; i <= k - d; ++i) out.band(d, i) = band(d, i);
    return out;
}

BandedSymmetricMatrix BandedSymmetricMatrix::trailing_block(int k) const {
    const int m = n_ - k + 1;
    BandedSymmetricMatrix out(m, b_ < m - 1 ? b_ : (m > 1 ? m - 1 : 0));
    for (int i = 1; i <= m; ++i) out.diag(i) = diag(k + i - 1);
    for (int d = 1; d <= out.b_; ++d)
        for (int i = 1; i <= m - d; ++i) out.band(d, i) = band(d, k + i - 1);
    return out;
}

BandedSymmetricMatrix BandedSymmetricMatrix::reversed() const {
    BandedSymmetricMatrix out(n_, b_);
    for (int i = 1; i <= n_; ++i) out.diag(i) = diag(n_ + 1 - i);
    for (int d = 1; d <= b_; ++d)
        for (int i = 1; i <= n_ - d; ++i) out.band(d, i) = band(d, n_ + 1 - i - d);
    return out;
}

std::uint64_t BandedSymmetricMatrix::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001B3ULL;
        }
    };
    mix(&n_, sizeof(n_));
    mix(&b_, sizeof(b_));
    mix(diag_.data(), diag_.size() * sizeof(double));
    for (const auto& band : off_) mix(band.data(), band.size() * sizeof(double));
    return h;
}

}  // namespace wbrm
