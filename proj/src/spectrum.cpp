#include "wbrm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <lapacke.h>

#include "wbrm/errors.hpp"

namespace wbrm {

namespace {

// Column-major LAPACK band storage, upper triangle: ab(ka + i - j, j) = a(i,j).
std::vector<double> to_lapack_band(const BandedSymmetricMatrix& m) {
    const int n = m.dim();
    const int kd = m.half_bandwidth();
    const int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(n), 0.0);
    for (int j = 1; j <= n; ++j) {
        for (int i = std::max(1, j - kd); i <= j; ++i) {
            const double v = i == j ? m.diag(i) : m.band(j - i, i);
            ab[static_cast<std::size_t>(kd + (i - j)) +
               static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(ldab)] = v;
        }
    }
    return ab;
}

[[noreturn]] void throw_convergence(const BandedSymmetricMatrix& m, int info, const char* routine) {
    std::ostringstream os;
    os << routine << " failed (info=" << info << ") on matrix n=" << m.dim()
       << " b=" << m.half_bandwidth() << " fingerprint=" << std::hex << m.fingerprint();
    throw ConvergenceError(os.str());
}

}  // namespace

SpectrumResult diagonalize(const BandedSymmetricMatrix& m, int dense_limit) {
    const int n = m.dim();
    if (n > dense_limit)
        throw ValidationError("diagonalize: dimension exceeds the dense limit");

    auto ab = to_lapack_band(m);
    const int kd = m.half_bandwidth();
    SpectrumResult out;
    out.energies.resize(n);
    Eigen::MatrixXd z(n, n);  // column a = eigenvector a
    const int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'V', 'U', n, kd, ab.data(), kd + 1,
                                    out.energies.data(), z.data(), n);
    if (info != 0) throw_convergence(m, info, "dsbevd");
    out.components = z.transpose();  // components(a, k) = <k|a>
    return out;
}

Eigen::VectorXd eigenvalues_banded(const BandedSymmetricMatrix& m) {
    const int n = m.dim();
    auto ab = to_lapack_band(m);
    const int kd = m.half_bandwidth();
    Eigen::VectorXd w(n);
    const int info =
        LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), kd + 1, w.data(), nullptr, 1);
    if (info != 0) throw_convergence(m, info, "dsbev");
    return w;
}

double spectral_radius_banded(const BandedSymmetricMatrix& m) {
    if (m.dim() == 0) return 0.0;
    const Eigen::VectorXd w = eigenvalues_banded(m);
    return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

double spectral_radius(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 0.0;
    if (m.rows() != m.cols()) throw ValidationError("spectral_radius: matrix must be square");
    if (!m.allFinite()) throw ValidationError("spectral_radius: non-finite entries");

    std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    // dgeev wants column-major; spectral radius is transpose-invariant, so the
    // layout of the copy does not matter.
    Eigen::Map<Eigen::MatrixXd>(a.data(), n, n) = m;
    std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
    const int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                                   wi.data(), nullptr, 1, nullptr, 1);
    if (info != 0) {
        std::ostringstream os;
        os << "dgeev failed (info=" << info << ") on dense matrix n=" << n;
        throw ConvergenceError(os.str());
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s = std::max(s, std::hypot(wr[static_cast<std::size_t>(i)], wi[static_cast<std::size_t>(i)]));
    return s;
}

}  // namespace wbrm
