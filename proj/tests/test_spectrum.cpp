#include <doctest.h>

#include <cmath>

#include "wbrm/errors.hpp"
#include "wbrm/spectrum.hpp"
#include "wbrm/wbrm_model.hpp"

using namespace wbrm;

TEST_CASE("diagonal matrix diagonalizes to identity components") {
    BandedSymmetricMatrix m(5, 1);
    for (int i = 1; i <= 5; ++i) m.diag(i) = i;
    const auto spec = diagonalize(m);
    for (int i = 0; i < 5; ++i) {
        CHECK(spec.energies(i) == doctest::Approx(i + 1.0).epsilon(1e-14));
        for (int k = 0; k < 5; ++k)
            CHECK(std::abs(spec.components(i, k)) == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("2x2 closed form") {
    const double x = 0.7;
    BandedSymmetricMatrix m(2, 1);
    m.diag(1) = 1.0;
    m.diag(2) = 2.0;
    m.band(1, 1) = x;
    const auto spec = diagonalize(m);
    const double root = std::sqrt(1.0 + 4.0 * x * x);
    CHECK(spec.energies(0) == doctest::Approx((3.0 - root) / 2.0).epsilon(1e-14));
    CHECK(spec.energies(1) == doctest::Approx((3.0 + root) / 2.0).epsilon(1e-14));
}

TEST_CASE("eigenvalue sum matches the trace and eigenpairs have small residual") {
    const auto inst = generate_wbrm(50, 3, 1.5, 5u);
    const auto h = hamiltonian(inst);
    const auto spec = diagonalize(h);

    double trace = 0.0;
    for (int i = 1; i <= 50; ++i) trace += h.diag(i);
    CHECK(spec.energies.sum() == doctest::Approx(trace).epsilon(1e-10));

    const Eigen::MatrixXd dense = h.dense();
    const double hnorm = dense.norm();
    for (int a = 0; a < 50; ++a) {
        const Eigen::VectorXd v = spec.components.row(a).transpose();
        CHECK(std::abs(v.norm() - 1.0) < 1e-10);
        const double res = (dense * v - spec.energies(a) * v).norm();
        CHECK(res <= 1e-8 * hnorm);
    }
    for (int a = 1; a < 50; ++a) CHECK(spec.energies(a) >= spec.energies(a - 1));
}

TEST_CASE("dense limit is enforced") {
    BandedSymmetricMatrix m(10, 1);
    for (int i = 1; i <= 10; ++i) m.diag(i) = i;
    CHECK_THROWS_AS(diagonalize(m, 5), ValidationError);
}

TEST_CASE("eigenvalues_banded matches full diagonalize") {
    const auto inst = generate_wbrm(80, 4, 2.0, 9u);
    const auto h = hamiltonian(inst);
    const auto spec = diagonalize(h);
    const auto vals = eigenvalues_banded(h);
    for (int i = 0; i < 80; ++i)
        CHECK(vals(i) == doctest::Approx(spec.energies(i)).epsilon(1e-12));
}

TEST_CASE("spectral radius: zero matrix and symmetric agreement") {
    CHECK(spectral_radius(Eigen::MatrixXd::Zero(4, 4)) == 0.0);

    const auto inst = generate_wbrm(30, 2, 1.0, 17u);
    BandedSymmetricMatrix s(30, 2);
    for (int d = 1; d <= 2; ++d)
        for (int i = 1; i <= 30 - d; ++i) s.band(d, i) = 0.3 * inst.v.band(d, i);
    const double dense_s = spectral_radius(s.dense());
    const double band_s = spectral_radius_banded(s);
    CHECK(dense_s == doctest::Approx(band_s).epsilon(1e-11));
}

TEST_CASE("spectral radius rejects non-finite input") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(spectral_radius(m), ValidationError);
}
