#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wbrm/blas_threads.hpp"
#include "wbrm/config.hpp"
#include "wbrm/csvio.hpp"
#include "wbrm/errors.hpp"
#include "wbrm/experiments.hpp"
#include "wbrm/npt.hpp"
#include "wbrm/parallel.hpp"
#include "wbrm/shapes.hpp"
#include "wbrm/spectrum.hpp"

namespace {

// Exit codes: 2 validation/config, 3 resonance guard, 4 runtime failure.
constexpr int kExitValidation = 2;
constexpr int kExitResonance = 3;
constexpr int kExitRuntime = 4;

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int cmd_npt(int n, int b, double lambda, std::uint64_t seed, int alpha, const std::string& method,
            int dense_limit) {
    const auto inst = wbrm::generate_wbrm(n, b, lambda, seed);
    if (alpha < 1 || alpha > n) throw wbrm::ValidationError("alpha-index out of range");
    const auto h = wbrm::hamiltonian(inst);
    if (n > dense_limit) throw wbrm::ValidationError("n exceeds the dense limit");
    const Eigen::VectorXd energies = wbrm::eigenvalues_banded(h);
    const double e = energies(alpha - 1);

    nlohmann::json out;
    out["n"] = n;
    out["b"] = b;
    out["lambda"] = lambda;
    out["seed"] = seed;
    out["alpha"] = alpha;
    out["e_alpha"] = e;
    out["regions"] = nlohmann::json::array();

    auto report = [&](const wbrm::NptRegion& region, const char* requested) {
        const double s = wbrm::region_spectral_radius(inst, e, region);
        nlohmann::json j;
        j["requested"] = requested;
        j["method"] = wbrm::npt_method_name(region.method);
        j["p1"] = region.p1;
        j["p2"] = region.p2;
        j["width"] = region.width();
        j["shoulder_lo"] = {region.shoulder_lo.first, region.shoulder_lo.second};
        j["shoulder_hi"] = {region.shoulder_hi.first, region.shoulder_hi.second};
        j["s_check"] = {{"value", s}, {"pass", s < 1.0}};
        out["regions"].push_back(j);
    };

    if (method == "oracle" || method == "both") report(wbrm::npt_oracle(inst, e), "oracle");
    if (method == "iterative" || method == "both") report(wbrm::npt_iterative(inst, e), "iterative");
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_shapes(int n, int b, double lambda, std::uint64_t seed, int realizations,
               const std::string& out_dir, int dense_limit) {
    std::vector<wbrm::SpectrumResult> ensemble;
    for (int r = 0; r < realizations; ++r) {
        const auto inst = wbrm::generate_wbrm(n, b, lambda, seed + static_cast<std::uint64_t>(r));
        ensemble.push_back(wbrm::diagonalize(wbrm::hamiltonian(inst), dense_limit));
    }
    std::vector<const wbrm::SpectrumResult*> views;
    for (const auto& s : ensemble) views.push_back(&s);

    const wbrm::SpectralWindow win{};
    const auto ef = wbrm::averaged_ef_shape(views, win);
    const auto ldos = wbrm::averaged_ldos_shape(views, win);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw wbrm::Error("cannot create output directory: " + out_dir);
    wbrm::write_text_file(out_dir + "/ef_profile.csv", wbrm::profile_to_csv(ef));
    wbrm::write_text_file(out_dir + "/ldos_profile.csv", wbrm::profile_to_csv(ldos));

    wbrm::WidthReport report;
    report.w_f = wbrm::half_width(ef);
    report.w_l = wbrm::half_width(ldos);
    double np_sum = 0.0, l_sum = 0.0;
    int np_count = 0;
    for (int r = 0; r < realizations; ++r) {
        const auto& spec = ensemble[static_cast<std::size_t>(r)];
        const auto inst = wbrm::generate_wbrm(n, b, lambda, seed + static_cast<std::uint64_t>(r));
        for (int alpha = win.first(n); alpha <= win.last(n); alpha += 5) {
            try {
                np_sum += wbrm::npt_iterative(inst, spec.energies(alpha - 1)).width();
                l_sum += wbrm::localization_length(spec.components.row(alpha - 1));
                ++np_count;
            } catch (const wbrm::Error&) {
            }
        }
    }
    if (np_count > 0) {
        report.np_mean = np_sum / np_count;
        report.l_mean = l_sum / np_count;
        report.eta = wbrm::eta(report.w_l, report.np_mean, b);
    }
    wbrm::write_text_file(out_dir + "/width_report.json", wbrm::width_report_to_json(lambda, report));
    std::cout << wbrm::width_report_to_json(lambda, report) << std::endl;
    return 0;
}

int cmd_experiment(const std::string& kind, const std::string& config_path, const std::string& out_override,
                   int workers) {
    wbrm::SweepConfig cfg = wbrm::parse_config_file(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;

    const double t0 = now_s();
    if (kind == "confirm") {
        const auto result = wbrm::run_confirm(cfg, workers);
        wbrm::write_confirm(cfg, result, now_s() - t0);
        std::printf("confirm: %zu states, %ld mismatches, %ld fallback, %ld oracle-errors, %ld skipped\n",
                    result.rows.size(), result.mismatches, result.fallback_states,
                    result.oracle_errors, result.skipped);
        if (result.mismatches != 0) throw wbrm::Error("confirm: method mismatch detected");
    } else if (kind == "sweep") {
        const auto result = wbrm::run_sweep(cfg, workers);
        wbrm::write_sweep(cfg, result, now_s() - t0);
        std::printf("lambda,mean_np,std_np,states\n");
        for (const auto& pt : result.points)
            std::printf("%g,%g,%g,%d\n", pt.lambda, pt.mean_np, pt.std_np, pt.states);
        if (result.small_fit)
            std::printf("erfc fit: C=%g beta=%g R2=%g\n", result.small_fit->params[0],
                        result.small_fit->params[1], result.small_fit->r2);
        if (result.linear_fit)
            std::printf("linear fit: a=%g b=%g R2=%g\n", result.linear_fit->params[0],
                        result.linear_fit->params[1], result.linear_fit->r2);
        if (result.loglarge_fit)
            std::printf("sqrt-log fit: a=%g b=%g R2=%g\n", result.loglarge_fit->params[0],
                        result.loglarge_fit->params[1], result.loglarge_fit->r2);
    } else if (kind == "compare") {
        const auto result = wbrm::run_compare(cfg, workers);
        wbrm::write_compare(cfg, result, now_s() - t0);
        std::printf("lambda,mean_np,w_L,w_F,L,eta\n");
        for (const auto& rec : result.records)
            std::printf("%g,%g,%g,%g,%g,%g\n", rec.lambda, rec.mean_np, rec.w_l, rec.w_f,
                        rec.l_mean, rec.eta);
    } else if (kind == "dist") {
        const auto result = wbrm::run_distributions(cfg, workers);
        wbrm::write_distributions(cfg, result, now_s() - t0);
        std::printf("x fit: C=%g beta=%g R2=%g KS=%g\n", result.x_fit.params[0],
                    result.x_fit.params[1], result.x_fit.r2, result.x_ks);
        for (const auto& tf : result.tail_fits)
            std::printf("h tail b=%d: slope=%g R2=%g\n", tf.b, tf.slope, tf.r2);
    } else {
        throw wbrm::ValidationError("unknown experiment kind: " + kind);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    wbrm::limit_blas_threads();

    CLI::App app{"NPT-region widths and LDOS experiments for banded random matrices"};
    app.require_subcommand(1);

    // npt
    int n = 500, b = 8, alpha = 0, dense_limit = 4000;
    double lambda = 1.0;
    std::uint64_t seed = 1;
    std::string method = "both";
    auto* npt = app.add_subcommand("npt", "NPT region of one eigenstate");
    npt->add_option("--n", n, "matrix dimension");
    npt->add_option("--b", b, "half-bandwidth");
    npt->add_option("--lambda", lambda, "perturbation strength");
    npt->add_option("--seed", seed, "realization seed");
    npt->add_option("--alpha-index", alpha, "eigenstate index (1-based; default: middle)");
    npt->add_option("--method", method, "oracle|iterative|both")
        ->check(CLI::IsMember({"oracle", "iterative", "both"}));
    npt->add_option("--dense-limit", dense_limit, "dense eigensolver cap");

    // experiment
    std::string exp_kind, config_path, out_dir;
    int workers = 0;
    auto* experiment = app.add_subcommand("experiment", "ensemble experiments");
    experiment->add_option("kind", exp_kind, "confirm|sweep|compare|dist")->required();
    experiment->add_option("--config", config_path, "config file")->required();
    experiment->add_option("--out", out_dir, "output directory override");
    experiment->add_option("--workers", workers, "worker threads (0 = auto)");

    // shapes
    int sh_n = 500, sh_b = 8, sh_realizations = 4;
    double sh_lambda = 5.0;
    std::uint64_t sh_seed = 1;
    std::string sh_out = "out/shapes";
    auto* shapes = app.add_subcommand("shapes", "averaged EF and LDOS profiles");
    shapes->add_option("--n", sh_n, "matrix dimension");
    shapes->add_option("--b", sh_b, "half-bandwidth");
    shapes->add_option("--lambda", sh_lambda, "perturbation strength");
    shapes->add_option("--seed", sh_seed, "base seed");
    shapes->add_option("--realizations", sh_realizations, "ensemble size");
    shapes->add_option("--out", sh_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (npt->parsed()) {
            if (alpha == 0) alpha = n / 2;
            return cmd_npt(n, b, lambda, seed, alpha, method, dense_limit);
        }
        if (experiment->parsed()) return cmd_experiment(exp_kind, config_path, out_dir, workers);
        if (shapes->parsed())
            return cmd_shapes(sh_n, sh_b, sh_lambda, sh_seed, sh_realizations, sh_out, dense_limit);
    } catch (const wbrm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const wbrm::ResonanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResonance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitValidation;
}
