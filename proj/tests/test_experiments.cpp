#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wbrm/experiments.hpp"
#include "wbrm/rng.hpp"
#include "wbrm/spectrum.hpp"

using namespace wbrm;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("seed derivation is stable and collision-averse") {
    CHECK(derived_seed(1, 0, 0) == derived_seed(1, 0, 0));
    CHECK(derived_seed(1, 0, 0) != derived_seed(1, 0, 1));
    CHECK(derived_seed(1, 0, 0) != derived_seed(1, 1, 0));
    CHECK(derived_seed(1, 0, 0) != derived_seed(2, 0, 0));
}

TEST_CASE("state selection: middle window, deterministic cap") {
    const auto all = select_states(100, 0.25, 0.75, 0, 9u);
    REQUIRE(all.size() == 50);
    CHECK(all.front() == 26);
    CHECK(all.back() == 75);

    const auto capped = select_states(100, 0.25, 0.75, 10, 9u);
    REQUIRE(capped.size() == 10);
    CHECK(capped == select_states(100, 0.25, 0.75, 10, 9u));
    CHECK(std::is_sorted(capped.begin(), capped.end()));
    for (int a : capped) {
        CHECK(a >= 26);
        CHECK(a <= 75);
    }
    CHECK(capped != select_states(100, 0.25, 0.75, 10, 10u));
}

TEST_CASE("degenerate sweep point equals the direct per-state computation") {
    SweepConfig cfg;
    cfg.n = 90;
    cfg.b = 2;
    cfg.lambda_grid = {1.5};
    cfg.realizations = 1;
    cfg.master_seed = 314;
    cfg.state_cap = 5;
    const auto result = run_sweep(cfg, 1);
    REQUIRE(result.points.size() == 1);

    const auto seed = derived_seed(cfg.master_seed, 0, 0);
    const auto inst = generate_wbrm(90, 2, 1.5, seed);
    const auto energies = eigenvalues_banded(hamiltonian(inst));
    const auto states = select_states(90, 0.25, 0.75, 5, wbrm::derive_key(seed, 0x5741545354415445ULL));
    double sum = 0.0;
    int count = 0;
    for (int alpha : states) {
        sum += npt_iterative(inst, energies(alpha - 1)).width();
        ++count;
    }
    CHECK(result.points[0].states == count);
    CHECK(result.points[0].mean_np == doctest::Approx(sum / count).epsilon(1e-15));
}

TEST_CASE("sweep output is byte-identical for any worker count") {
    SweepConfig cfg;
    cfg.n = 80;
    cfg.b = 1;
    cfg.lambda_grid = {0.5, 1.0, 2.0};
    cfg.realizations = 2;
    cfg.master_seed = 2718;
    cfg.state_cap = 8;

    namespace fs = std::filesystem;
    const auto tmp = fs::temp_directory_path() / "wbrm_det_test";
    fs::remove_all(tmp);

    cfg.output_dir = (tmp / "w1").string();
    write_sweep(cfg, run_sweep(cfg, 1), 0.0);
    cfg.output_dir = (tmp / "w4").string();
    write_sweep(cfg, run_sweep(cfg, 4), 0.0);

    CHECK(slurp((tmp / "w1" / "sweep.csv").string()) == slurp((tmp / "w4" / "sweep.csv").string()));
    fs::remove_all(tmp);
}

TEST_CASE("confirm: methods agree and the fallback path is exercised") {
    SweepConfig cfg;
    cfg.n = 120;
    cfg.b = 5;
    cfg.lambda_grid = {0.5, 3.0};
    cfg.realizations = 1;
    cfg.master_seed = 99;
    cfg.state_cap = 12;
    const auto result = run_confirm(cfg, 2);
    CHECK(result.mismatches == 0);
    CHECK(result.fallback_states > 0);
    CHECK(result.rows.size() > 12);
    for (const auto& row : result.rows)
        if (row.comparable && row.iterative.width() > cfg.b) CHECK(row.match);
}

TEST_CASE("compare produces finite records and sane widths") {
    SweepConfig cfg;
    cfg.n = 120;
    cfg.b = 4;
    cfg.lambda_grid = {2.0};
    cfg.realizations = 2;
    cfg.master_seed = 555;
    cfg.state_cap = 20;
    const auto result = run_compare(cfg, 2);
    REQUIRE(result.records.size() == 1);
    const auto& rec = result.records[0];
    CHECK(rec.states > 0);
    CHECK(rec.mean_np >= 1.0);
    CHECK(rec.w_l > 0.0);
    CHECK(rec.w_f > 0.0);
    CHECK(rec.l_mean >= 1.0);
    CHECK(std::isfinite(rec.eta));
}

TEST_CASE("KS distance is small for samples drawn from the model") {
    SplitMix64 rng(808u);
    const double beta0 = 0.9;
    std::vector<double> samples;
    while (samples.size() < 30000) {
        const double x = 1.0 - std::log(rng.next_uniform()) / beta0;
        if (rng.next_uniform() < 1.0 / std::sqrt(x)) samples.push_back(x);
    }
    CHECK(ks_distance_px(samples, beta0) < 0.02);
}
