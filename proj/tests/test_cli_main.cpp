// Exercises the installed CLI binary end to end (path via WBRM_CLI).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run(const std::string& args) {
    const char* cli = std::getenv("WBRM_CLI");
    REQUIRE(cli != nullptr);
    const std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("npt: both methods agree and the radius check passes") {
    const auto r = run("npt --n 200 --b 6 --lambda 4 --seed 7 --alpha-index 100 --method both");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    REQUIRE(j["regions"].size() == 2);
    CHECK(j["regions"][0]["p1"] == j["regions"][1]["p1"]);
    CHECK(j["regions"][0]["p2"] == j["regions"][1]["p2"]);
    for (const auto& region : j["regions"]) {
        CHECK(region["s_check"]["pass"].get<bool>());
        CHECK(region["width"].get<int>() >= 1);
    }
}

TEST_CASE("npt: lambda = 0 gives width one") {
    const auto r = run("npt --n 60 --b 3 --lambda 0 --seed 3 --alpha-index 30 --method iterative");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["regions"][0]["width"].get<int>() == 1);
    CHECK(j["regions"][0]["p1"].get<int>() == 30);
}

TEST_CASE("npt: validation failures exit with code 2") {
    CHECK(run("npt --n 500 --b 600 --lambda 1 --seed 1").exit_code == 2);
    CHECK(run("npt --n 100 --b 2 --lambda 1 --seed 1 --alpha-index 4000").exit_code == 2);
    CHECK(run("npt --method nonsense").exit_code == 2);
    CHECK(run("bogus-subcommand").exit_code == 2);
}

TEST_CASE("npt: resonance guard exits with code 3") {
    // A vanishingly small but nonzero perturbation leaves the eigenvalues on
    // the integer lattice, which the guard must reject.
    const auto r = run("npt --n 60 --b 2 --lambda 1e-200 --seed 5 --alpha-index 30 --method iterative");
    CHECK(r.exit_code == 3);
}

TEST_CASE("experiment: missing and malformed configs exit with code 2") {
    CHECK(run("experiment sweep --config /nonexistent.toml").exit_code == 2);

    namespace fs = std::filesystem;
    const auto bad = fs::temp_directory_path() / "wbrm_bad_config.toml";
    std::ofstream(bad) << "unknown_key = 1\n";
    CHECK(run("experiment sweep --config " + bad.string()).exit_code == 2);
    fs::remove(bad);
}

TEST_CASE("experiment sweep: writes csv and fit artifacts") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "wbrm_cli_sweep";
    fs::remove_all(dir);
    const auto cfgfile = fs::temp_directory_path() / "wbrm_cli_sweep.toml";
    std::ofstream(cfgfile) << "n = 80\nb = 1\nlambda_grid = [0.5, 1.0]\nrealizations = 1\n"
                           << "master_seed = 5\nstate_cap = 6\n";
    const auto r = run("experiment sweep --config " + cfgfile.string() + " --out " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "metadata_sweep.json"));

    std::ifstream csv(dir / "sweep.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "lambda,mean_np,std_np,n_used,states,skipped");
    fs::remove_all(dir);
    fs::remove(cfgfile);
}

TEST_CASE("experiment confirm: zero mismatches in the summary") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "wbrm_cli_confirm";
    fs::remove_all(dir);
    const auto cfgfile = fs::temp_directory_path() / "wbrm_cli_confirm.toml";
    std::ofstream(cfgfile) << "n = 100\nb = 4\nlambda_grid = [0.5, 2.5]\nrealizations = 1\n"
                           << "master_seed = 11\nstate_cap = 8\n";
    const auto r = run("experiment confirm --config " + cfgfile.string() + " --out " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find(" 0 mismatches") != std::string::npos);
    CHECK(fs::exists(dir / "confirm.csv"));
    fs::remove_all(dir);
    fs::remove(cfgfile);
}

TEST_CASE("shapes: writes profiles and a width report") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "wbrm_cli_shapes";
    fs::remove_all(dir);
    const auto r = run("shapes --n 100 --b 4 --lambda 2 --seed 9 --realizations 2 --out " + dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "ef_profile.csv"));
    CHECK(fs::exists(dir / "ldos_profile.csv"));
    CHECK(fs::exists(dir / "width_report.json"));
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["w_L"].get<double>() > 0.0);
    fs::remove_all(dir);
}
