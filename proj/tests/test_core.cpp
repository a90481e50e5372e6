#include <doctest.h>

#include <cmath>

#include "wbrm/errors.hpp"
#include "wbrm/wbrm_model.hpp"

using namespace wbrm;

TEST_CASE("generation is deterministic and bit-exact in the seed") {
    const auto a = generate_wbrm(64, 4, 2.5, 987654321u);
    const auto b = generate_wbrm(64, 4, 2.5, 987654321u);
    for (int d = 1; d <= 4; ++d)
        for (int i = 1; i <= 64 - d; ++i) CHECK(a.v.band(d, i) == b.v.band(d, i));

    const auto c = generate_wbrm(64, 4, 2.5, 987654322u);
    int diff = 0;
    for (int d = 1; d <= 4; ++d)
        for (int i = 1; i <= 64 - d; ++i) diff += a.v.band(d, i) != c.v.band(d, i);
    CHECK(diff > 100);
}

TEST_CASE("paper-scale parameters are accepted") {
    const auto inst = generate_wbrm(500, 8, 5.0, 1u);
    CHECK(inst.n == 500);
    CHECK(inst.b == 8);
    CHECK(inst.lambda == 5.0);
}

TEST_CASE("lambda = 0 keeps only the unperturbed diagonal") {
    const auto inst = generate_wbrm(5, 1, 0.0, 3u);
    const auto h = hamiltonian(inst);
    for (int i = 1; i <= 5; ++i) CHECK(h.diag(i) == static_cast<double>(i));
    for (int i = 1; i <= 4; ++i) CHECK(h.band(1, i) == 0.0);
}

TEST_CASE("hamiltonian is linear in lambda and tridiagonal at b = 1") {
    const auto one = generate_wbrm(40, 1, 1.0, 11u);
    const auto five = generate_wbrm(40, 1, 5.0, 11u);
    const auto h1 = hamiltonian(one);
    const auto h5 = hamiltonian(five);
    for (int i = 1; i <= 39; ++i) {
        CHECK(h1.band(1, i) == one.v.band(1, i));
        CHECK(h5.band(1, i) == 5.0 * h1.band(1, i));
    }
}

TEST_CASE("validation rejects bad shapes") {
    CHECK_THROWS_AS(generate_wbrm(1, 1, 1.0, 0u), ValidationError);
    CHECK_THROWS_AS(generate_wbrm(500, 600, 1.0, 0u), ValidationError);
    CHECK_THROWS_AS(generate_wbrm(10, 10, 1.0, 0u), ValidationError);
    CHECK_THROWS_AS(generate_wbrm(10, 2, -0.5, 0u), ValidationError);
}

TEST_CASE("band entries are standard normal: moment Monte Carlo") {
    // ~1.2e6 draws pooled over bands
    const auto inst = generate_wbrm(250000, 5, 1.0, 2024u);
    double sum = 0.0, sq = 0.0;
    long count = 0;
    for (int d = 1; d <= 5; ++d)
        for (int i = 1; i <= inst.n - d; ++i) {
            const double v = inst.v.band(d, i);
            sum += v;
            sq += v * v;
            ++count;
        }
    const double mean = sum / count;
    const double var = sq / count - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("instance serialization stores parameters only and regenerates bands") {
    const auto inst = generate_wbrm(32, 3, 1.25, 777u);
    const std::string json = instance_to_json(inst);
    const auto back = instance_from_json(json);
    CHECK(back.n == inst.n);
    CHECK(back.b == inst.b);
    CHECK(back.lambda == inst.lambda);
    CHECK(back.seed == inst.seed);
    for (int d = 1; d <= 3; ++d)
        for (int i = 1; i <= 32 - d; ++i) CHECK(back.v.band(d, i) == inst.v.band(d, i));
    CHECK_THROWS_AS(instance_from_json("{\"n\": 4}"), ValidationError);
}
