#include "wbrm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "wbrm/banded.hpp"
#include "wbrm/errors.hpp"
#include "wbrm/rng.hpp"
#include "wbrm/spectrum.hpp"

namespace wbrm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLnClamp = -690.77552789821368;  // ln(1e-300)
}  // namespace

QuarticCoeffs quartic_coeffs(const std::array<double, 4>& v, double f, double lambda) {
    if (!(f > 0.0)) throw ValidationError("quartic_coeffs: f must be positive");
    const double l2 = lambda * lambda;
    const double c1 = l2 * v[0] * v[0] / ((f + 3.0) * (f + 4.0));
    const double c2 = l2 * v[1] * v[1] / ((f + 2.0) * (f + 3.0));
    const double c3 = l2 * v[2] * v[2] / ((f + 1.0) * (f + 2.0));
    const double c4 = l2 * v[3] * v[3] / (f * (f + 1.0));
    QuarticCoeffs q;
    q.a = c1 + c2 + c3 + c4;
    q.b = c1 * c3 + c1 * c4 + c2 * c4;
    q.f = f;
    q.lambda = lambda;
    q.v = v;
    return q;
}

double quartic_s(const QuarticCoeffs& q) {
    const double disc = q.a * q.a - 4.0 * q.b;
    if (disc < 0.0)
        throw Error("quartic_s: negative discriminant (invariant violation)");
    const double mu2 = 0.5 * (q.a + std::sqrt(disc));
    return std::sqrt(mu2);
}

bool quartic_exceeds_one(const QuarticCoeffs& q) { return q.a > 2.0 || q.a > q.b + 1.0; }

Eigen::MatrixXd assemble_u_up(const std::array<double, 4>& v, double f, double lambda) {
    // Rows run over the five levels below the region, farthest first; the
    // row-r denominator is f + 4 - (r - 1) for r = 1..5.
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(5, 5);
    for (int r = 1; r <= 4; ++r) {
        const double dr = f + 5.0 - r;        // denominator of row r
        const double drn = f + 5.0 - (r + 1);  // denominator of row r+1
        u(r - 1, r) = lambda * v[static_cast<std::size_t>(r - 1)] / dr;
        u(r, r - 1) = lambda * v[static_cast<std::size_t>(r - 1)] / drn;
    }
    return u;
}

double x_statistic(const std::array<double, 4>& v, double f) {
    return quartic_coeffs(v, f, 1.0).a;
}

double x_max(const std::array<double, 4>& v_up, const std::array<double, 4>& v_down, double f) {
    return std::max(x_statistic(v_up, f), x_statistic(v_down, 3.0 - f));
}

std::vector<double> sample_x(std::size_t count, std::uint64_t seed) {
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * 16u;
        std::array<double, 4> vu, vd;
        for (int k = 0; k < 4; ++k) {
            vu[static_cast<std::size_t>(k)] = normal_at(seed, base + static_cast<std::uint64_t>(k));
            vd[static_cast<std::size_t>(k)] = normal_at(seed, base + 4u + static_cast<std::uint64_t>(k));
        }
        const double f = 1.0 + uniform_at(seed, base + 8u);
        xs[i] = x_max(vu, vd, f);
    }
    return xs;
}

double erfc_cf(double x) {
    if (x < 0.0) return 2.0 - erfc_cf(-x);
    if (x < 2.0) {
        // erf series: 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))
        double term = x;
        double sum = x;
        for (int n = 1; n < 120; ++n) {
            term *= -x * x / n;
            const double add = term / (2 * n + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return 1.0 - 2.0 / std::sqrt(kPi) * sum;
    }
    // Continued fraction (modified Lentz):
    // erfc(x) = x exp(-x^2)/sqrt(pi) / (x^2 + 1/2/(1 + 1/(x^2 + 3/2/(1 + ...))))
    // with partial numerators k/2 and denominators alternating x^2, 1.
    const double tiny = 1e-300;
    const double x2 = x * x;
    double f = tiny, c = f, d = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double a = k == 0 ? 1.0 : 0.5 * k;
        const double b = k % 2 == 0 ? x2 : 1.0;
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return x * std::exp(-x2) / std::sqrt(kPi) * f;
}

std::string FitResult::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["params"] = params;
    j["r2"] = r2;
    j["n_points"] = n_points;
    j["residual_norm"] = residual_norm;
    return j.dump();
}

std::array<double, 3> linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 2) throw ValidationError("linear_fit: need >= 2 paired points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw FitError("linear_fit: degenerate abscissa");
    const double b = sxy / sxx;
    const double a = my - b * mx;
    double ssres = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (a + b * xs[i]);
        ssres += r * r;
    }
    if (syy == 0.0) throw FitError("linear_fit: constant data, R^2 undefined");
    return {a, b, 1.0 - ssres / syy};
}

Histogram make_histogram(const std::vector<double>& samples, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw ValidationError("make_histogram: bad bin spec");
    Histogram h;
    h.bin_width = (hi - lo) / bins;
    h.centers.resize(static_cast<std::size_t>(bins));
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    h.density.assign(static_cast<std::size_t>(bins), 0.0);
    for (int i = 0; i < bins; ++i) h.centers[static_cast<std::size_t>(i)] = lo + (i + 0.5) * h.bin_width;
    std::size_t inside = 0;
    for (double s : samples) {
        if (s < lo || s >= hi) continue;
        const int idx = static_cast<int>((s - lo) / h.bin_width);
        if (idx >= 0 && idx < bins) {
            ++h.counts[static_cast<std::size_t>(idx)];
            ++inside;
        }
    }
    if (inside > 0)
        for (int i = 0; i < bins; ++i)
            h.density[static_cast<std::size_t>(i)] =
                static_cast<double>(h.counts[static_cast<std::size_t>(i)]) /
                (static_cast<double>(inside) * h.bin_width);
    return h;
}

FitResult fit_px(const std::vector<double>& samples) {
    if (samples.size() < 10000) throw FitError("fit_px: needs at least 1e4 samples");

    std::vector<double> tail;
    for (double s : samples)
        if (s >= 1.0) tail.push_back(s);
    if (tail.size() < 100) throw FitError("fit_px: too few samples above 1");

    std::vector<double> sorted = tail;
    std::sort(sorted.begin(), sorted.end());
    const double hi = sorted[static_cast<std::size_t>(0.999 * (sorted.size() - 1))];
    if (!(hi > 1.0)) throw FitError("fit_px: degenerate sample spread");

    const Histogram h = make_histogram(samples, 60, 1.0, hi);
    const double mass = static_cast<double>(tail.size()) / static_cast<double>(samples.size());
    std::size_t inside = 0;
    for (std::size_t c : h.counts) inside += c;
    // Histogram density is conditional on the window; rescale to the
    // unconditional density of X.
    const double window_mass = static_cast<double>(inside) / static_cast<double>(samples.size());

    // log density + 0.5 log x is linear in x with slope -beta; bins weighted
    // by their counts (the log of a Poisson count has variance ~ 1/count).
    std::vector<double> xs, ys, ws;
    for (std::size_t i = 0; i < h.centers.size(); ++i) {
        if (h.counts[i] < 5) continue;
        xs.push_back(h.centers[i]);
        ys.push_back(std::log(h.density[i] * window_mass) + 0.5 * std::log(h.centers[i]));
        ws.push_back(static_cast<double>(h.counts[i]));
    }
    if (xs.size() < 4) throw FitError("fit_px: not enough populated bins");

    double wsum = 0, wx = 0, wy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        wsum += ws[i];
        wx += ws[i] * xs[i];
        wy += ws[i] * ys[i];
    }
    const double mx = wx / wsum, my = wy / wsum;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
        sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
        syy += ws[i] * (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw FitError("fit_px: degenerate histogram");
    const double slope = sxy / sxx;
    const double a = my - slope * mx;
    double ssres = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (a + slope * xs[i]);
        ssres += ws[i] * r * r;
    }
    const double r2 = 1.0 - ssres / syy;
    const double beta = -slope;
    if (!(beta > 0.0)) throw FitError("fit_px: fitted beta not positive");

    // Pin C so that the fitted form reproduces the observed mass on [1, inf):
    // integral_1^inf C x^{-1/2} e^{-beta x} dx = C sqrt(pi/beta) erfc(sqrt(beta)).
    const double c = mass / (std::sqrt(kPi / beta) * erfc_cf(std::sqrt(beta)));
    (void)a;

    FitResult fit;
    fit.model = "px";
    fit.params = {c, beta};
    fit.r2 = r2;
    fit.n_points = xs.size();
    double res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double pred = std::log(c) - beta * xs[i];
        res += (ys[i] - pred) * (ys[i] - pred);
    }
    fit.residual_norm = std::sqrt(res);
    return fit;
}

double mean_np_small(double lambda, double c, double beta) {
    if (!(lambda > 0.0)) throw ValidationError("mean_np_small: lambda must be > 0");
    if (!(beta > 0.0)) throw ValidationError("mean_np_small: beta must be > 0");
    return 1.0 + c * std::sqrt(kPi / beta) * erfc_cf(std::sqrt(beta) / lambda);
}

double px_model_cdf(double x, double beta) {
    if (x <= 1.0) return 0.0;
    const double z = erfc_cf(std::sqrt(beta));
    return (z - erfc_cf(std::sqrt(beta * x))) / z;
}

EmpiricalCdf EmpiricalCdf::from_samples(std::vector<double> samples) {
    if (samples.empty()) throw ValidationError("EmpiricalCdf: no samples");
    std::sort(samples.begin(), samples.end());
    EmpiricalCdf cdf;
    cdf.values_ = std::move(samples);
    const std::size_t t = cdf.values_.size();
    cdf.suffix_.assign(t, 0.0);
    // Trapezoid of ln H over the sample grid, accumulated from the top
    // (ln H = 0 at and beyond the largest sample).
    for (std::size_t i = t - 1; i-- > 0;) {
        const double lh_i = std::log(static_cast<double>(i + 1) / static_cast<double>(t));
        const double lh_n = i + 2 <= t - 1
                                ? std::log(static_cast<double>(i + 2) / static_cast<double>(t))
                                : 0.0;
        const double dt = cdf.values_[i + 1] - cdf.values_[i];
        cdf.suffix_[i] = cdf.suffix_[i + 1] + 0.5 * (lh_i + lh_n) * dt;
    }
    return cdf;
}

double EmpiricalCdf::eval(double t) const {
    const auto it = std::upper_bound(values_.begin(), values_.end(), t);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalCdf::tail_log_integral(double x) const {
    const std::size_t t = values_.size();
    if (x >= values_.back()) return 0.0;
    if (x < values_.front()) {
        const double lh0 = std::log(1.0 / static_cast<double>(t));
        return suffix_.front() + 0.5 * (kLnClamp + lh0) * (values_.front() - x);
    }
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    const std::size_t next = static_cast<std::size_t>(it - values_.begin());  // first sample > x
    const double lh_here = std::log(static_cast<double>(next) / static_cast<double>(t));
    const double lh_next = std::log(static_cast<double>(next + 1) / static_cast<double>(t));
    return suffix_[next] + 0.5 * (lh_here + lh_next) * (values_[next] - x);
}

int standard_matrix_dim(int b) { return std::max(5, 4 * b); }

EmpiricalCdf standard_matrix_h(int m, int b, std::size_t trials, std::uint64_t seed) {
    if (m <= b) throw ValidationError("standard_matrix_h: need m > b");
    if (trials < 10) throw ValidationError("standard_matrix_h: too few trials");
    std::vector<double> s(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        BandedSymmetricMatrix mat(m, b);
        const std::uint64_t trial_seed = derive_key(seed, t);
        std::uint64_t ctr = 0;
        for (int d = 1; d <= b; ++d)
            for (int i = 1; i <= m - d; ++i) mat.band(d, i) = normal_at(trial_seed, ctr++);
        s[t] = spectral_radius_banded(mat);
    }
    return EmpiricalCdf::from_samples(std::move(s));
}

double p_n(double n, double lambda, int m, const EmpiricalCdf& h) {
    if (!(lambda > 0.0)) throw ValidationError("p_n: lambda must be > 0");
    if (m < 2) throw ValidationError("p_n: m must be >= 2");
    const double integral = h.tail_log_integral(n / (2.0 * lambda));
    const double p = 1.0 - std::exp(lambda / (m - 1.0) * integral);
    return std::clamp(p, 0.0, 1.0);
}

LadderResult mean_np_ladder(double lambda, int m, const EmpiricalCdf& h) {
    if (m >= lambda)
        std::fprintf(stderr,
                     "warning: truncation dimension m=%d is not small against lambda=%g; "
                     "the ladder estimate is outside its validity regime\n",
                     m, lambda);
    LadderResult out;
    double sum = 0.0;
    int bracket_lo = 0;  // last integer n with P > 1/2
    const int n_max = 100000000;
    for (int n = 1; n <= n_max; ++n) {
        const double p = p_n(static_cast<double>(n), lambda, m, h);
        sum += p;
        if (p > 0.5) bracket_lo = n;
        if (p < 1e-9) break;
    }
    out.sum_np = sum;

    // P never exceeds 1/2 on integer n: the crossing sits below 1 (P -> 1 as
    // n -> 0 through the clamped region) unless P is flat there too.
    if (bracket_lo == 0 && p_n(1e-9, lambda, m, h) <= 0.5)
        throw SearchError("mean_np_ladder: P(n) does not bracket 1/2");
    double lo = bracket_lo == 0 ? 1e-9 : static_cast<double>(bracket_lo);
    double hi = bracket_lo == 0 ? 1.0 : static_cast<double>(bracket_lo + 1);
    // Expand in the rare case the step landed exactly on the crossing.
    while (p_n(hi, lambda, m, h) > 0.5) hi += 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p_n(mid, lambda, m, h) > 0.5 ? lo : hi) = mid;
        if (hi - lo < 1e-10 * std::max(1.0, hi)) break;
    }
    out.n_c = 0.5 * (lo + hi);
    return out;
}

double mean_np_large(double lambda, double c_prime) {
    if (!(lambda > 1.0)) throw ValidationError("mean_np_large: lambda must be > 1");
    return c_prime * lambda * std::sqrt(std::log(lambda));
}

double tail_integral(const EmpiricalCdf& h, double x) { return h.tail_log_integral(x); }

namespace {

double model_eval(FitModel model, const std::vector<double>& p, double x) {
    switch (model) {
        case FitModel::linear: return p[0] + p[1] * x;
        case FitModel::erfc_np: return 1.0 + p[0] * std::sqrt(kPi / p[1]) * erfc_cf(std::sqrt(p[1]) / x);
        case FitModel::sqrtlog_linear: return p[0] + p[1] * std::sqrt(std::log(x));
    }
    return 0.0;
}

double sum_sq_residual(FitModel model, const std::vector<double>& p,
                       const std::vector<std::pair<double, double>>& pts) {
    double s = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - model_eval(model, p, x);
        s += r * r;
    }
    return s;
}

// Nelder-Mead on the log of positive parameters.
std::vector<double> nelder_mead(FitModel model, const std::vector<std::pair<double, double>>& pts,
                                std::vector<double> start) {
    const std::size_t dim = start.size();
    auto cost = [&](const std::vector<double>& lp) {
        std::vector<double> p(dim);
        for (std::size_t i = 0; i < dim; ++i) p[i] = std::exp(lp[i]);
        return sum_sq_residual(model, p, pts);
    };
    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += 0.2;
    std::vector<double> f(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) f[i] = cost(simplex[i]);

    for (int iter = 0; iter < 400; ++iter) {
        std::vector<std::size_t> order(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b2) { return f[a] < f[b2]; });
        if (f[order.back()] - f[order.front()] < 1e-14 * (1.0 + std::abs(f[order.front()]))) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[order[i]][d] / dim;
        const std::size_t worst = order.back();

        auto combine = [&](double t) {
            std::vector<double> out(dim);
            for (std::size_t d = 0; d < dim; ++d)
                out[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
            return out;
        };
        const auto reflected = combine(-1.0);
        const double fr = cost(reflected);
        if (fr < f[order.front()]) {
            const auto expanded = combine(-2.0);
            const double fe = cost(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                f[worst] = fe;
            } else {
                simplex[worst] = reflected;
                f[worst] = fr;
            }
        } else if (fr < f[order[dim - 1]]) {
            simplex[worst] = reflected;
            f[worst] = fr;
        } else {
            const auto contracted = combine(0.5);
            const double fc = cost(contracted);
            if (fc < f[worst]) {
                simplex[worst] = contracted;
                f[worst] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t d = 0; d < dim; ++d)
                        simplex[order[i]][d] = 0.5 * (simplex[order[i]][d] + simplex[order[0]][d]);
                    f[order[i]] = cost(simplex[order[i]]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (f[i] < f[best]) best = i;
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = std::exp(simplex[best][i]);
    return out;
}

}  // namespace

FitResult fit_curve(FitModel model, const std::vector<std::pair<double, double>>& points) {
    const std::size_t n_params = 2;
    if (points.size() < n_params + 2)
        throw ValidationError("fit_curve: need at least params + 2 points");
    for (const auto& [x, y] : points)
        if (!std::isfinite(x) || !std::isfinite(y))
            throw ValidationError("fit_curve: non-finite data");

    FitResult fit;
    fit.n_points = points.size();

    double sstot = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) mean_y += y;
    mean_y /= static_cast<double>(points.size());
    for (const auto& [x, y] : points) sstot += (y - mean_y) * (y - mean_y);
    if (sstot == 0.0) throw FitError("fit_curve: constant data, R^2 undefined");

    std::vector<double> params;
    if (model == FitModel::linear || model == FitModel::sqrtlog_linear) {
        std::vector<double> xs, ys;
        for (const auto& [x, y] : points) {
            xs.push_back(model == FitModel::linear ? x : std::sqrt(std::log(x)));
            ys.push_back(y);
        }
        const auto [a, b, r2] = linear_fit(xs, ys);
        params = {a, b};
        fit.model = model == FitModel::linear ? "linear" : "sqrtlog_linear";
        (void)r2;
    } else {
        // Coarse log-grid over (C, beta), then simplex refinement.
        double best_cost = std::numeric_limits<double>::infinity();
        std::vector<double> best_lp = {0.0, 0.0};
        for (int ic = 0; ic < 24; ++ic) {
            for (int ib = 0; ib < 24; ++ib) {
                const double lc = -4.0 + 8.0 * ic / 23.0;
                const double lb = -4.0 + 8.0 * ib / 23.0;
                const double cost = sum_sq_residual(model, {std::exp(lc), std::exp(lb)}, points);
                if (cost < best_cost) {
                    best_cost = cost;
                    best_lp = {lc, lb};
                }
            }
        }
        params = nelder_mead(model, points, best_lp);
        fit.model = "erfc_np";
    }

    double ssres = 0.0;
    for (const auto& [x, y] : points) {
        const double r = y - model_eval(model, params, x);
        ssres += r * r;
    }
    fit.params = params;
    fit.r2 = 1.0 - ssres / sstot;
    fit.residual_norm = std::sqrt(ssres);
    return fit;
}

}  // namespace wbrm
