#include "wbrm/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wbrm/errors.hpp"

namespace wbrm {

double ShapeProfile::total_intensity() const {
    double t = 0.0;
    for (const auto& [bin, v] : bins) t += v;
    return t;
}

void ShapeAccumulator::add_state(const Eigen::VectorXd& weights, const Eigen::VectorXd& epsilons) {
    if (weights.size() != epsilons.size())
        throw ValidationError("shape accumulator: weights/epsilons size mismatch");
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        const double w = weights(i);
        if (w == 0.0) continue;
        const double eps = epsilons(i);
        const int bin = static_cast<int>(std::floor(eps / bin_width_ + 0.5));
        sums_[bin] += w;
        moment1_sum_ += w * eps;
        moment2_sum_ += w * eps * eps;
    }
    ++count_;
}

void ShapeAccumulator::merge(const ShapeAccumulator& other) {
    for (const auto& [bin, v] : other.sums_) sums_[bin] += v;
    count_ += other.count_;
    moment1_sum_ += other.moment1_sum_;
    moment2_sum_ += other.moment2_sum_;
}

ShapeProfile ShapeAccumulator::profile() const {
    if (count_ == 0) throw ValidationError("shape accumulator: no states accumulated");
    ShapeProfile p;
    p.bin_width = bin_width_;
    p.kind = kind_;
    p.count = count_;
    const double inv = 1.0 / static_cast<double>(count_);
    for (const auto& [bin, v] : sums_) p.bins[bin] = v * inv;
    p.moment1 = moment1_sum_ * inv;
    p.moment2 = moment2_sum_ * inv;
    return p;
}

int SpectralWindow::first(int n) const { return static_cast<int>(std::floor(lo_frac * n)) + 1; }
int SpectralWindow::last(int n) const { return static_cast<int>(std::floor(hi_frac * n)); }
bool SpectralWindow::contains(int index, int n) const {
    return index >= first(n) && index <= last(n);
}

namespace {

ShapeProfile averaged_shape(const std::vector<const SpectrumResult*>& ensemble,
                            const SpectralWindow& filter, double bin_width, ProfileKind kind) {
    ShapeAccumulator acc(kind, bin_width);
    for (const SpectrumResult* spec : ensemble) {
        const int n = static_cast<int>(spec->energies.size());
        const int lo = filter.first(n), hi = filter.last(n);
        for (int idx = lo; idx <= hi; ++idx) {
            Eigen::VectorXd weights(n), epsilons(n);
            if (kind == ProfileKind::ef) {
                const double e = spec->energies(idx - 1);
                for (int k = 1; k <= n; ++k) {
                    const double c = spec->components(idx - 1, k - 1);
                    weights(k - 1) = c * c;
                    epsilons(k - 1) = e - static_cast<double>(k);
                }
            } else {
                for (int a = 1; a <= n; ++a) {
                    const double c = spec->components(a - 1, idx - 1);
                    weights(a - 1) = c * c;
                    epsilons(a - 1) = spec->energies(a - 1) - static_cast<double>(idx);
                }
            }
            acc.add_state(weights, epsilons);
        }
    }
    if (acc.count() == 0) throw ValidationError("averaged shape: filter selected no states");
    return acc.profile();
}

}  // namespace

ShapeProfile averaged_ef_shape(const std::vector<const SpectrumResult*>& ensemble,
                               const SpectralWindow& filter, double bin_width) {
    return averaged_shape(ensemble, filter, bin_width, ProfileKind::ef);
}

ShapeProfile averaged_ldos_shape(const std::vector<const SpectrumResult*>& ensemble,
                                 const SpectralWindow& filter, double bin_width) {
    return averaged_shape(ensemble, filter, bin_width, ProfileKind::ldos);
}

double half_width(const ShapeProfile& p) {
    if (p.bins.empty()) throw DegenerateProfileError("half_width: empty profile");

    // Contiguous intensity array over [min_bin, max_bin], one virtual empty
    // bin padded on each side so an isolated peak reads one bin wide.
    const int lo = p.bins.begin()->first - 1;
    const int hi = p.bins.rbegin()->first + 1;
    std::vector<double> y(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [bin, v] : p.bins) y[static_cast<std::size_t>(bin - lo)] = v;

    int peak = 0;
    for (int i = 1; i < static_cast<int>(y.size()); ++i)
        if (y[static_cast<std::size_t>(i)] > y[static_cast<std::size_t>(peak)]) peak = i;
    double ymax = y[static_cast<std::size_t>(peak)];
    double ymin = ymax;
    for (const auto& [bin, v] : p.bins) ymin = std::min(ymin, v);
    if (!(ymax > 0.0) || (p.bins.size() >= 2 && ymax - ymin <= 1e-15 * ymax))
        throw DegenerateProfileError("half_width: profile is flat");
    auto at = [&](int i) { return y[static_cast<std::size_t>(i)]; };

    // On profiles wide enough to have a body, the peak level is the largest
    // centered 3-bin mean: a single noisy bin must not set the half level.
    if (p.bins.size() >= 5) {
        double best = 0.0;
        for (int i = 1; i + 1 < static_cast<int>(y.size()); ++i)
            best = std::max(best, (at(i - 1) + at(i) + at(i + 1)) / 3.0);
        ymax = best;
        for (int i = 0; i < static_cast<int>(y.size()); ++i)
            if (at(i) >= ymax) {
                peak = i;  // anchors the inner end of the crossing walks
                break;
            }
    }

    const double half = 0.5 * ymax;

    // Outermost half crossings, walking from the padded edges toward the
    // peak: equivalent on clean unimodal shapes, robust to bin noise on
    // flat-topped ones.
    double left = static_cast<double>(peak);
    for (int i = 0; i < peak; ++i) {
        if (at(i + 1) >= half) {
            left = i + (half - at(i)) / (at(i + 1) - at(i));
            break;
        }
    }
    double right = static_cast<double>(peak);
    for (int i = static_cast<int>(y.size()) - 1; i > peak; --i) {
        if (at(i - 1) >= half) {
            right = i - (half - at(i)) / (at(i - 1) - at(i));
            break;
        }
    }
    return (right - left) * p.bin_width;
}

ShapeProfile mirror_symmetrized(const ShapeProfile& p) {
    ShapeProfile out = p;
    out.bins.clear();
    for (const auto& [bin, v] : p.bins) {
        const auto mirror = p.bins.find(-bin);
        const double mv = mirror == p.bins.end() ? 0.0 : mirror->second;
        out.bins[bin] = 0.5 * (v + mv);
    }
    for (const auto& [bin, v] : p.bins)
        if (!out.bins.count(-bin)) out.bins[-bin] = 0.5 * v;
    out.moment1 = 0.0;
    return out;
}

double localization_length(const Eigen::VectorXd& row) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        const double w = row(i) * row(i);
        s += w * w;
    }
    if (s == 0.0) throw ValidationError("localization_length: zero vector");
    return 1.0 / s;
}

double eta(double w_l, double np_mean, int b) {
    if (b < 1) throw ValidationError("eta: b must be >= 1");
    return (w_l - np_mean) / (2.0 * b);
}

std::string width_report_to_json(double lambda, const WidthReport& r) {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["w_F"] = r.w_f;
    j["w_L"] = r.w_l;
    j["Np_mean"] = r.np_mean;
    j["L_mean"] = r.l_mean;
    j["eta"] = r.eta;
    return j.dump();
}

std::string profile_to_csv(const ShapeProfile& p) {
    std::ostringstream os;
    os << "epsilon_bin_center,intensity\n";
    char buf[64];
    for (const auto& [bin, v] : p.bins) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", bin * p.bin_width, v);
        os << buf;
    }
    return os.str();
}

}  // namespace wbrm
