#include "wbrm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wbrm/csvio.hpp"
#include "wbrm/errors.hpp"
#include "wbrm/parallel.hpp"
#include "wbrm/rng.hpp"
#include "wbrm/spectrum.hpp"

namespace wbrm {

std::uint64_t derived_seed(std::uint64_t master, int lambda_index, int realization_index) {
    const std::uint64_t packed = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(lambda_index)) << 32) |
                                 static_cast<std::uint64_t>(static_cast<std::uint32_t>(realization_index));
    return derive_key(master, packed);
}

std::vector<int> select_states(int n, double lo_frac, double hi_frac, int cap, std::uint64_t seed) {
    const int first = static_cast<int>(std::floor(lo_frac * n)) + 1;
    const int last = static_cast<int>(std::floor(hi_frac * n));
    std::vector<int> all;
    for (int a = first; a <= last; ++a) all.push_back(a);
    if (cap <= 0 || static_cast<int>(all.size()) <= cap) return all;

    // Seeded partial Fisher-Yates, then sorted for deterministic output order.
    SplitMix64 rng(seed);
    for (int i = 0; i < cap; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              static_cast<std::size_t>(rng.next_below(all.size() - static_cast<std::size_t>(i)));
        std::swap(all[static_cast<std::size_t>(i)], all[j]);
    }
    all.resize(static_cast<std::size_t>(cap));
    std::sort(all.begin(), all.end());
    return all;
}

namespace {

constexpr std::uint64_t kStateTag = 0x5741545354415445ULL;

struct WidthStats {
    double mean = 0.0;
    double stddev = 0.0;
};

WidthStats width_stats(const std::vector<int>& widths) {
    WidthStats s;
    if (widths.empty()) return s;
    double sum = 0.0;
    for (int w : widths) sum += w;
    s.mean = sum / static_cast<double>(widths.size());
    double sq = 0.0;
    for (int w : widths) sq += (w - s.mean) * (w - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(widths.size()));
    return s;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory: " + dir);
}

void write_metadata(const SweepConfig& cfg, const std::string& experiment, double elapsed_s,
                    const nlohmann::json& extra) {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["config"] = nlohmann::json::parse(config_to_json(cfg));
    j["elapsed_s"] = elapsed_s;
    j["version"] = "0.1.0";
    j["extra"] = extra;
    write_text_file(cfg.output_dir + "/metadata_" + experiment + ".json", j.dump(2));
}

}  // namespace

ConfirmResult run_confirm(const SweepConfig& cfg, int workers) {
    if (cfg.lambda_grid.empty()) throw ValidationError("run_confirm: empty lambda grid");

    struct Slot {
        std::vector<ConfirmRow> rows;
        long skipped = 0;
        long oracle_errors = 0;
    };
    std::vector<Slot> slots(cfg.lambda_grid.size());

    parallel_for(cfg.lambda_grid.size(), workers, [&](std::size_t il) {
        const double lambda = cfg.lambda_grid[il];
        const std::uint64_t seed = derived_seed(cfg.master_seed, static_cast<int>(il), 0);
        const WbrmInstance inst = generate_wbrm(cfg.n, cfg.b, lambda, seed);
        const Eigen::VectorXd energies = eigenvalues_banded(hamiltonian(inst));
        const std::vector<int> states =
            select_states(cfg.n, cfg.window_lo, cfg.window_hi, cfg.state_cap, derive_key(seed, kStateTag));

        Slot& slot = slots[il];
        for (int alpha : states) {
            const double e = energies(alpha - 1);
            ConfirmRow row;
            row.lambda = lambda;
            row.alpha = alpha;
            row.e_alpha = e;
            try {
                row.iterative = npt_iterative(inst, e);
            } catch (const Error&) {
                ++slot.skipped;
                continue;
            }
            try {
                row.oracle = npt_oracle(inst, e);
                row.comparable = true;
                row.match = row.oracle.p1 == row.iterative.p1 && row.oracle.p2 == row.iterative.p2;
            } catch (const SearchError&) {
                row.comparable = false;
                ++slot.oracle_errors;
            }
            slot.rows.push_back(row);
        }
    });

    ConfirmResult out;
    for (const Slot& slot : slots) {
        for (const ConfirmRow& row : slot.rows) {
            out.rows.push_back(row);
            if (row.iterative.method == NptMethod::oracle) ++out.fallback_states;
            if (row.comparable && row.iterative.width() > cfg.b && !row.match) ++out.mismatches;
        }
        out.skipped += slot.skipped;
        out.oracle_errors += slot.oracle_errors;
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg, int workers) {
    if (cfg.lambda_grid.empty()) throw ValidationError("run_sweep: empty lambda grid");

    struct Slot {
        std::vector<int> widths;
        int skipped = 0;
    };
    const std::size_t tasks = cfg.lambda_grid.size() * static_cast<std::size_t>(cfg.realizations);
    std::vector<Slot> slots(tasks);

    parallel_for(tasks, workers, [&](std::size_t t) {
        const std::size_t il = t / static_cast<std::size_t>(cfg.realizations);
        const int ir = static_cast<int>(t % static_cast<std::size_t>(cfg.realizations));
        const double lambda = cfg.lambda_grid[il];
        const int n_used = cfg.effective_n(lambda);
        const std::uint64_t seed = derived_seed(cfg.master_seed, static_cast<int>(il), ir);
        const WbrmInstance inst = generate_wbrm(n_used, cfg.b, lambda, seed);
        const Eigen::VectorXd energies = eigenvalues_banded(hamiltonian(inst));
        const std::vector<int> states =
            select_states(n_used, cfg.window_lo, cfg.window_hi, cfg.state_cap, derive_key(seed, kStateTag));

        Slot& slot = slots[t];
        for (int alpha : states) {
            try {
                slot.widths.push_back(npt_iterative(inst, energies(alpha - 1)).width());
            } catch (const Error&) {
                ++slot.skipped;
            }
        }
    });

    SweepResult out;
    for (std::size_t il = 0; il < cfg.lambda_grid.size(); ++il) {
        std::vector<int> widths;
        int skipped = 0;
        for (int ir = 0; ir < cfg.realizations; ++ir) {
            const Slot& slot = slots[il * static_cast<std::size_t>(cfg.realizations) + static_cast<std::size_t>(ir)];
            widths.insert(widths.end(), slot.widths.begin(), slot.widths.end());
            skipped += slot.skipped;
        }
        const WidthStats ws = width_stats(widths);
        SweepPoint pt;
        pt.lambda = cfg.lambda_grid[il];
        pt.mean_np = ws.mean;
        pt.std_np = ws.stddev;
        pt.n_used = cfg.effective_n(pt.lambda);
        pt.states = static_cast<int>(widths.size());
        pt.skipped = skipped;
        out.points.push_back(pt);
    }

    auto window_points = [&](double lo, double hi, bool over_lambda) {
        std::vector<std::pair<double, double>> pts;
        for (const SweepPoint& pt : out.points)
            if (pt.lambda >= lo && pt.lambda <= hi && pt.states > 0)
                pts.emplace_back(pt.lambda, over_lambda ? pt.mean_np / pt.lambda : pt.mean_np);
        return pts;
    };

    if (const auto pts = window_points(cfg.small_fit_lo, cfg.small_fit_hi, false); pts.size() >= 4)
        out.small_fit = fit_curve(FitModel::erfc_np, pts);
    if (const auto pts = window_points(cfg.linear_fit_lo, cfg.linear_fit_hi, false); pts.size() >= 4)
        out.linear_fit = fit_curve(FitModel::linear, pts);
    if (const auto pts = window_points(cfg.loglarge_fit_lo, cfg.loglarge_fit_hi, true); pts.size() >= 4)
        out.loglarge_fit = fit_curve(FitModel::sqrtlog_linear, pts);
    return out;
}

CompareResult run_compare(const SweepConfig& cfg, int workers) {
    if (cfg.lambda_grid.empty()) throw ValidationError("run_compare: empty lambda grid");

    struct Slot {
        ShapeAccumulator ef{ProfileKind::ef};
        ShapeAccumulator ldos{ProfileKind::ldos};
        std::vector<int> widths;
        std::vector<double> lengths;
        int skipped = 0;
    };
    const std::size_t tasks = cfg.lambda_grid.size() * static_cast<std::size_t>(cfg.realizations);
    std::vector<Slot> slots(tasks);

    // Wide profiles get proportionally wider bins so the per-bin Monte Carlo
    // noise stays small relative to the body level.
    auto bin_width_for = [&](double lambda) {
        return std::max(1.0, std::floor(lambda * std::sqrt(2.0 * cfg.b) / 32.0));
    };

    parallel_for(tasks, workers, [&](std::size_t t) {
        const std::size_t il = t / static_cast<std::size_t>(cfg.realizations);
        const int ir = static_cast<int>(t % static_cast<std::size_t>(cfg.realizations));
        const double lambda = cfg.lambda_grid[il];
        slots[t].ef = ShapeAccumulator(ProfileKind::ef, bin_width_for(lambda));
        slots[t].ldos = ShapeAccumulator(ProfileKind::ldos, bin_width_for(lambda));
        const std::uint64_t seed = derived_seed(cfg.master_seed, static_cast<int>(il), ir);
        const WbrmInstance inst = generate_wbrm(cfg.n, cfg.b, lambda, seed);
        const SpectrumResult spec = diagonalize(hamiltonian(inst), cfg.dense_limit);
        const std::vector<int> states =
            select_states(cfg.n, cfg.window_lo, cfg.window_hi, cfg.state_cap, derive_key(seed, kStateTag));

        Slot& slot = slots[t];
        const int n = cfg.n;
        for (int alpha : states) {
            const double e = spec.energies(alpha - 1);
            try {
                slot.widths.push_back(npt_iterative(inst, e).width());
            } catch (const Error&) {
                ++slot.skipped;
                continue;
            }
            slot.lengths.push_back(localization_length(spec.components.row(alpha - 1)));
            Eigen::VectorXd weights(n), epsilons(n);
            for (int k = 1; k <= n; ++k) {
                const double c = spec.components(alpha - 1, k - 1);
                weights(k - 1) = c * c;
                epsilons(k - 1) = e - static_cast<double>(k);
            }
            slot.ef.add_state(weights, epsilons);
        }
        // LDOS over the middle window of basis states (no cap: it is cheap).
        const SpectralWindow win{cfg.window_lo, cfg.window_hi};
        for (int k = win.first(n); k <= win.last(n); ++k) {
            Eigen::VectorXd weights(n), epsilons(n);
            for (int a = 1; a <= n; ++a) {
                const double c = spec.components(a - 1, k - 1);
                weights(a - 1) = c * c;
                epsilons(a - 1) = spec.energies(a - 1) - static_cast<double>(k);
            }
            slot.ldos.add_state(weights, epsilons);
        }
    });

    CompareResult out;
    for (std::size_t il = 0; il < cfg.lambda_grid.size(); ++il) {
        ShapeAccumulator ef(ProfileKind::ef, bin_width_for(cfg.lambda_grid[il]));
        ShapeAccumulator ldos(ProfileKind::ldos, bin_width_for(cfg.lambda_grid[il]));
        std::vector<int> widths;
        std::vector<double> lengths;
        int skipped = 0;
        for (int ir = 0; ir < cfg.realizations; ++ir) {
            const Slot& slot = slots[il * static_cast<std::size_t>(cfg.realizations) + static_cast<std::size_t>(ir)];
            ef.merge(slot.ef);
            ldos.merge(slot.ldos);
            widths.insert(widths.end(), slot.widths.begin(), slot.widths.end());
            lengths.insert(lengths.end(), slot.lengths.begin(), slot.lengths.end());
            skipped += slot.skipped;
        }
        const ShapeProfile ef_profile = ef.profile();
        const ShapeProfile ldos_profile = ldos.profile();
        const WidthStats ws = width_stats(widths);

        EnsembleRecord rec;
        rec.lambda = cfg.lambda_grid[il];
        rec.mean_np = ws.mean;
        rec.std_np = ws.stddev;
        rec.w_f = half_width(mirror_symmetrized(ef_profile));
        rec.w_l = half_width(mirror_symmetrized(ldos_profile));
        rec.l_mean = lengths.empty() ? 0.0
                                     : std::accumulate(lengths.begin(), lengths.end(), 0.0) /
                                           static_cast<double>(lengths.size());
        rec.eta = eta(rec.w_l, rec.mean_np, cfg.b);
        rec.realizations = cfg.realizations;
        rec.states = static_cast<int>(widths.size());
        rec.skipped = skipped;
        out.records.push_back(rec);
        out.ef_profiles.push_back(ef_profile);
        out.ldos_profiles.push_back(ldos_profile);
    }
    return out;
}

double ks_distance_px(const std::vector<double>& samples, double beta) {
    std::vector<double> tail;
    for (double s : samples)
        if (s >= 1.0) tail.push_back(s);
    if (tail.empty()) return 1.0;
    std::sort(tail.begin(), tail.end());
    const double n = static_cast<double>(tail.size());
    double d = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double f = px_model_cdf(tail[i], beta);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

DistResult run_distributions(const SweepConfig& cfg, int workers) {
    DistResult out;
    out.x_samples = sample_x(static_cast<std::size_t>(cfg.x_samples), derive_key(cfg.master_seed, 1));
    out.x_fit = fit_px(out.x_samples);
    out.x_ks = ks_distance_px(out.x_samples, out.x_fit.params[1]);

    for (std::size_t ib = 0; ib < cfg.dist_b_values.size(); ++ib) {
        const int b = static_cast<int>(cfg.dist_b_values[ib]);
        const int m = standard_matrix_dim(b);
        const EmpiricalCdf h = standard_matrix_h(m, b, static_cast<std::size_t>(cfg.h_trials),
                                                 derive_key(cfg.master_seed, 100 + ib));
        const Histogram hist = make_histogram(h.values(), 80, 0.0, h.max_value() * 1.0001);
        out.h_hists.push_back(hist);

        // Gaussian tail: log h linear in t^2 above the upper quantile.
        const double t_lo = h.values()[static_cast<std::size_t>(0.85 * (h.size() - 1))];
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < hist.centers.size(); ++i) {
            if (hist.centers[i] < t_lo || hist.counts[i] < 10) continue;
            xs.push_back(hist.centers[i] * hist.centers[i]);
            ys.push_back(std::log(hist.density[i]));
        }
        TailFit tf;
        tf.b = b;
        if (xs.size() >= 4) {
            const auto [a, slope, r2] = linear_fit(xs, ys);
            (void)a;
            tf.slope = slope;
            tf.r2 = r2;
        }
        out.tail_fits.push_back(tf);

        for (double lambda : cfg.dist_lambdas) {
            PnCurve curve;
            curve.b = b;
            curve.lambda = lambda;
            for (int n = 1; n < 10000000; ++n) {
                const double p = p_n(n, lambda, m, h);
                curve.n.push_back(n);
                curve.p.push_back(p);
                if (p < 1e-9) break;
            }
            const LadderResult ladder = mean_np_ladder(lambda, m, h);
            curve.n_c = ladder.n_c;
            curve.sum_np = ladder.sum_np;
            out.pn_curves.push_back(std::move(curve));
        }
        out.h_cdfs.push_back(h);
    }

    // Truncation-estimate error |s(U) - max_i s(M_i)| on one-sided blocks.
    {
        const int b = 1;
        const int m = standard_matrix_dim(b);
        const double lambda = cfg.dist_lambdas.empty() ? 20.0 : cfg.dist_lambdas.front();
        const int n = std::max(cfg.n, static_cast<int>(8 * lambda));
        const int reals = 4;
        std::vector<std::vector<double>> slots(static_cast<std::size_t>(reals));
        parallel_for(slots.size(), workers, [&](std::size_t ir) {
            const std::uint64_t seed = derived_seed(cfg.master_seed, 7070, static_cast<int>(ir));
            const WbrmInstance inst = generate_wbrm(n, b, lambda, seed);
            const Eigen::VectorXd energies = eigenvalues_banded(hamiltonian(inst));
            const std::vector<int> states =
                select_states(n, cfg.window_lo, cfg.window_hi, 50, derive_key(seed, kStateTag));
            for (int alpha : states) {
                const double e = energies(alpha - 1);
                try {
                    const NptRegion region = npt_iterative(inst, e);
                    if (region.p1 - 1 < 2 * m) continue;
                    const SMatrices s = build_s_matrices(inst, e);
                    const BandedSymmetricMatrix block = s.s_p.leading_block(region.p1 - 1);
                    const double exact = spectral_radius_banded(block);
                    double approx = 0.0;
                    for (int i = 0;; ++i) {
                        const int top = region.p1 - (m - 1) * i - 1;
                        const int bottom = top - (m - 1);
                        if (bottom < 1) break;
                        const BandedSymmetricMatrix sub =
                            block.trailing_block(bottom).leading_block(m);
                        approx = std::max(approx, spectral_radius_banded(sub));
                    }
                    slots[ir].push_back(std::abs(exact - approx));
                } catch (const Error&) {
                    continue;
                }
            }
        });
        for (const auto& slot : slots)
            out.su_errors.insert(out.su_errors.end(), slot.begin(), slot.end());
    }
    return out;
}

void write_confirm(const SweepConfig& cfg, const ConfirmResult& r, double elapsed_s) {
    ensure_dir(cfg.output_dir);
    CsvWriter csv(cfg.output_dir + "/confirm.csv",
                  {"lambda", "alpha", "e_alpha", "p1_oracle", "p2_oracle", "p1_iterative",
                   "p2_iterative", "width_iterative", "method", "comparable", "match"});
    for (const ConfirmRow& row : r.rows) {
        csv.row({fmt_double(row.lambda), std::to_string(row.alpha), fmt_double(row.e_alpha),
                 std::to_string(row.comparable ? row.oracle.p1 : -1),
                 std::to_string(row.comparable ? row.oracle.p2 : -1),
                 std::to_string(row.iterative.p1), std::to_string(row.iterative.p2),
                 std::to_string(row.iterative.width()), npt_method_name(row.iterative.method),
                 row.comparable ? "1" : "0", row.match ? "1" : "0"});
    }
    nlohmann::json extra;
    extra["mismatches"] = r.mismatches;
    extra["fallback_states"] = r.fallback_states;
    extra["oracle_errors"] = r.oracle_errors;
    extra["skipped"] = r.skipped;
    extra["rows"] = r.rows.size();
    write_metadata(cfg, "confirm", elapsed_s, extra);
}

void write_sweep(const SweepConfig& cfg, const SweepResult& r, double elapsed_s) {
    ensure_dir(cfg.output_dir);
    CsvWriter csv(cfg.output_dir + "/sweep.csv",
                  {"lambda", "mean_np", "std_np", "n_used", "states", "skipped"});
    for (const SweepPoint& pt : r.points)
        csv.row({fmt_double(pt.lambda), fmt_double(pt.mean_np), fmt_double(pt.std_np),
                 std::to_string(pt.n_used), std::to_string(pt.states), std::to_string(pt.skipped)});
    if (r.small_fit) write_text_file(cfg.output_dir + "/fit_small.json", r.small_fit->to_json());
    if (r.linear_fit) write_text_file(cfg.output_dir + "/fit_linear.json", r.linear_fit->to_json());
    if (r.loglarge_fit)
        write_text_file(cfg.output_dir + "/fit_loglarge.json", r.loglarge_fit->to_json());
    nlohmann::json extra;
    extra["points"] = r.points.size();
    write_metadata(cfg, "sweep", elapsed_s, extra);
}

void write_compare(const SweepConfig& cfg, const CompareResult& r, double elapsed_s) {
    ensure_dir(cfg.output_dir);
    CsvWriter csv(cfg.output_dir + "/compare.csv",
                  {"lambda", "mean_np", "std_np", "w_L", "w_F", "L_mean", "eta", "realizations",
                   "states", "skipped"});
    for (const EnsembleRecord& rec : r.records)
        csv.row({fmt_double(rec.lambda), fmt_double(rec.mean_np), fmt_double(rec.std_np),
                 fmt_double(rec.w_l), fmt_double(rec.w_f), fmt_double(rec.l_mean),
                 fmt_double(rec.eta), std::to_string(rec.realizations), std::to_string(rec.states),
                 std::to_string(rec.skipped)});
    std::ostringstream reports;
    for (const EnsembleRecord& rec : r.records) {
        WidthReport wr;
        wr.w_f = rec.w_f;
        wr.w_l = rec.w_l;
        wr.np_mean = rec.mean_np;
        wr.l_mean = rec.l_mean;
        wr.eta = rec.eta;
        reports << width_report_to_json(rec.lambda, wr) << '\n';
    }
    write_text_file(cfg.output_dir + "/width_reports.jsonl", reports.str());
    for (std::size_t i = 0; i < r.ef_profiles.size(); ++i) {
        const std::string tag = fmt_double(r.records[i].lambda);
        write_text_file(cfg.output_dir + "/ef_profile_lambda" + tag + ".csv",
                        profile_to_csv(r.ef_profiles[i]));
        write_text_file(cfg.output_dir + "/ldos_profile_lambda" + tag + ".csv",
                        profile_to_csv(r.ldos_profiles[i]));
    }
    nlohmann::json extra;
    extra["records"] = r.records.size();
    write_metadata(cfg, "compare", elapsed_s, extra);
}

void write_distributions(const SweepConfig& cfg, const DistResult& r, double elapsed_s) {
    ensure_dir(cfg.output_dir);
    {
        std::vector<double> sorted = r.x_samples;
        std::sort(sorted.begin(), sorted.end());
        const double hi = sorted[static_cast<std::size_t>(0.999 * (sorted.size() - 1))];
        const Histogram h = make_histogram(r.x_samples, 80, 0.0, hi);
        CsvWriter csv(cfg.output_dir + "/x_hist.csv", {"value", "pdf", "cdf"});
        const EmpiricalCdf ecdf = EmpiricalCdf::from_samples(sorted);
        for (std::size_t i = 0; i < h.centers.size(); ++i)
            csv.row({fmt_double(h.centers[i]), fmt_double(h.density[i]),
                     fmt_double(ecdf.eval(h.centers[i]))});
        nlohmann::json xj = nlohmann::json::parse(r.x_fit.to_json());
        xj["ks_distance"] = r.x_ks;
        write_text_file(cfg.output_dir + "/x_fit.json", xj.dump(2));
    }
    for (std::size_t ib = 0; ib < r.h_hists.size(); ++ib) {
        const int b = static_cast<int>(cfg.dist_b_values[ib]);
        CsvWriter csv(cfg.output_dir + "/h_b" + std::to_string(b) + ".csv", {"t", "pdf", "cdf"});
        for (std::size_t i = 0; i < r.h_hists[ib].centers.size(); ++i)
            csv.row({fmt_double(r.h_hists[ib].centers[i]), fmt_double(r.h_hists[ib].density[i]),
                     fmt_double(r.h_cdfs[ib].eval(r.h_hists[ib].centers[i]))});
    }
    {
        nlohmann::json tails = nlohmann::json::array();
        for (const TailFit& tf : r.tail_fits)
            tails.push_back({{"b", tf.b}, {"slope", tf.slope}, {"r2", tf.r2}});
        write_text_file(cfg.output_dir + "/h_tail_fits.json", tails.dump(2));
    }
    {
        CsvWriter csv(cfg.output_dir + "/pn_curves.csv", {"b", "lambda", "n", "p"});
        for (const PnCurve& c : r.pn_curves) {
            const std::size_t step = std::max<std::size_t>(1, c.n.size() / 400);
            for (std::size_t i = 0; i < c.n.size(); i += step)
                csv.row({std::to_string(c.b), fmt_double(c.lambda), fmt_double(c.n[i]),
                         fmt_double(c.p[i])});
        }
    }
    {
        CsvWriter csv(cfg.output_dir + "/su_error.csv", {"abs_error"});
        for (double v : r.su_errors) csv.row({fmt_double(v)});
    }
    nlohmann::json extra;
    extra["x_ks"] = r.x_ks;
    extra["su_error_samples"] = r.su_errors.size();
    write_metadata(cfg, "dist", elapsed_s, extra);
}

}  // namespace wbrm
