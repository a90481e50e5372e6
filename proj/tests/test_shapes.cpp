#include <doctest.h>

#include <cmath>

#include "wbrm/errors.hpp"
#include "wbrm/shapes.hpp"
#include "wbrm/spectrum.hpp"
#include "wbrm/theory.hpp"
#include "wbrm/wbrm_model.hpp"

using namespace wbrm;

namespace {

std::vector<SpectrumResult> make_ensemble(int n, int b, double lambda, int count, std::uint64_t seed) {
    std::vector<SpectrumResult> out;
    for (int r = 0; r < count; ++r)
        out.push_back(diagonalize(hamiltonian(generate_wbrm(n, b, lambda, seed + r))));
    return out;
}

std::vector<const SpectrumResult*> view(const std::vector<SpectrumResult>& v) {
    std::vector<const SpectrumResult*> out;
    for (const auto& s : v) out.push_back(&s);
    return out;
}

}  // namespace

TEST_CASE("lambda = 0 concentrates the shape in one bin") {
    const auto ens = make_ensemble(24, 2, 0.0, 1, 9u);
    const auto profile = averaged_ef_shape(view(ens), SpectralWindow{});
    REQUIRE(profile.bins.size() == 1);
    CHECK(profile.bins.count(0) == 1);
    CHECK(profile.bins.at(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profiles integrate to one and completeness holds") {
    const auto ens = make_ensemble(60, 3, 1.2, 2, 21u);
    const auto ef = averaged_ef_shape(view(ens), SpectralWindow{});
    const auto ldos = averaged_ldos_shape(view(ens), SpectralWindow{});
    CHECK(ef.total_intensity() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ldos.total_intensity() == doctest::Approx(1.0).epsilon(1e-6));
    for (const auto& [bin, v] : ef.bins) CHECK(v >= 0.0);

    // completeness: sum over alpha of |C_{alpha k}|^2 = 1 at fixed k
    const auto& spec = ens.front();
    for (int k = 1; k <= 60; k += 7) {
        double s = 0.0;
        for (int a = 1; a <= 60; ++a) s += spec.components(a - 1, k - 1) * spec.components(a - 1, k - 1);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("LDOS first moment equals the direct level-shift sum") {
    const auto ens = make_ensemble(50, 2, 1.0, 1, 33u);
    const auto& spec = ens.front();
    const SpectralWindow win{};
    const auto profile = averaged_ldos_shape(view(ens), win);

    double direct = 0.0;
    int count = 0;
    for (int k = win.first(50); k <= win.last(50); ++k) {
        for (int a = 1; a <= 50; ++a) {
            const double c = spec.components(a - 1, k - 1);
            direct += c * c * (spec.energies(a - 1) - k);
        }
        ++count;
    }
    direct /= count;
    CHECK(profile.moment1 == doctest::Approx(direct).epsilon(1e-10));
    // V has zero diagonal, so the mean shift is the diagonal expectation: zero.
    CHECK(std::abs(profile.moment1) < 1e-9);
}

TEST_CASE("LDOS second moment obeys the exact sum rule per state") {
    const auto inst = generate_wbrm(80, 4, 2.0, 55u);
    const auto spec = diagonalize(hamiltonian(inst));
    for (int k = 20; k <= 60; k += 5) {
        ShapeAccumulator acc(ProfileKind::ldos);
        Eigen::VectorXd weights(80), eps(80);
        for (int a = 1; a <= 80; ++a) {
            const double c = spec.components(a - 1, k - 1);
            weights(a - 1) = c * c;
            eps(a - 1) = spec.energies(a - 1) - k;
        }
        acc.add_state(weights, eps);
        const auto profile = acc.profile();
        double vsq = 0.0;
        for (int j = 1; j <= 80; ++j) {
            const double vij = inst.v.at(k, j);
            vsq += vij * vij;
        }
        const double expected = inst.lambda * inst.lambda * vsq;
        CHECK(std::abs(profile.moment2 - expected) < 1e-8);
    }
}

TEST_CASE("FWHM: delta profile reads one bin wide") {
    ShapeAccumulator acc(ProfileKind::ef);
    Eigen::VectorXd w(1), e(1);
    w << 1.0;
    e << 0.2;
    acc.add_state(w, e);
    CHECK(half_width(acc.profile()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("FWHM recovers the Lorentzian width") {
    const double gamma = 10.0;
    ShapeProfile p;
    p.bin_width = 1.0;
    p.count = 1;
    for (int c = -200; c <= 200; ++c) {
        const double x = static_cast<double>(c);
        p.bins[c] = (gamma / 2.0) / (x * x + gamma * gamma / 4.0);
    }
    CHECK(half_width(p) == doctest::Approx(gamma).epsilon(0.05));
}

TEST_CASE("flat profiles are rejected as degenerate") {
    ShapeProfile p;
    p.bin_width = 1.0;
    p.count = 1;
    for (int c = 0; c < 5; ++c) p.bins[c] = 0.2;
    CHECK_THROWS_AS(half_width(p), DegenerateProfileError);
}

TEST_CASE("localization length limits") {
    Eigen::VectorXd single = Eigen::VectorXd::Zero(10);
    single(3) = 1.0;
    CHECK(localization_length(single) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(25, 1.0 / 5.0);
    CHECK(localization_length(uniform) == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("eta trivial values") {
    CHECK(eta(10.0, 10.0, 8) == 0.0);
    CHECK(eta(10.0 + 16.0, 10.0, 8) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(eta(1.0, 1.0, 0), ValidationError);
}

TEST_CASE("EF profile mirror asymmetry shrinks with ensemble size") {
    auto asymmetry = [](const ShapeProfile& p) {
        double num = 0.0, den = 0.0;
        for (const auto& [bin, v] : p.bins) {
            const double mirrored = p.bins.count(-bin) ? p.bins.at(-bin) : 0.0;
            num += std::abs(v - mirrored);
            den += v + mirrored;
        }
        return num / den;
    };
    const auto small = make_ensemble(60, 3, 2.0, 1, 71u);
    const auto large = make_ensemble(60, 3, 2.0, 8, 71u);
    const double a_small = asymmetry(averaged_ef_shape(view(small), SpectralWindow{}));
    const double a_large = asymmetry(averaged_ef_shape(view(large), SpectralWindow{}));
    CHECK(a_large < a_small);
    CHECK(a_large < 0.2);
}

TEST_CASE("EF components decay beyond the shoulders") {
    // Averaged log-intensity versus distance past the shoulder: negative slope.
    const int n = 160, b = 4;
    const auto ens = make_ensemble(n, b, 3.0, 3, 202u);
    const auto profile = averaged_ef_shape(view(ens), SpectralWindow{});
    // locate the shoulder edge from the mean width of the profile core
    const double w = half_width(profile);
    const int edge = static_cast<int>(std::ceil(w / 2.0)) + b;
    std::vector<double> xs, ys;
    for (int c = edge; c <= edge + 25; ++c) {
        const auto it = profile.bins.find(c);
        if (it == profile.bins.end() || it->second <= 1e-14) break;
        xs.push_back(c);
        ys.push_back(std::log(it->second));
    }
    REQUIRE(xs.size() >= 6);
    const auto fit = linear_fit(xs, ys);
    CHECK(fit[1] < 0.0);
    CHECK(fit[2] > 0.8);
}
