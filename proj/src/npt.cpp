#include "wbrm/npt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wbrm/errors.hpp"

namespace wbrm {

namespace {

int floor_level(double e) { return static_cast<int>(std::floor(e)); }

void check_interior(const WbrmInstance& inst, double e) {
    const int k0 = floor_level(e);
    if (k0 < inst.b + 2 || inst.n - k0 < inst.b + 2)
        throw ValidationError("npt: e_alpha needs at least b+2 levels on each side");
}

void check_resonance_near(const WbrmInstance& inst, double e) {
    if (inst.lambda == 0.0) return;
    const int k0 = floor_level(e);
    if (e - k0 <= kEpsGuard || (k0 + 1) - e <= kEpsGuard) {
        std::ostringstream os;
        os << "resonance guard: e_alpha=" << e << " within " << kEpsGuard
           << " of an unperturbed level";
        throw ResonanceError(os.str());
    }
}

}  // namespace

const char* npt_method_name(NptMethod m) {
    switch (m) {
        case NptMethod::oracle: return "oracle";
        case NptMethod::iterative: return "iterative";
        case NptMethod::recursion: return "recursion";
    }
    return "?";
}

NptRegion make_region(int p1, int p2, int n, int b, NptMethod method) {
    NptRegion r;
    r.p1 = p1;
    r.p2 = p2;
    r.shoulder_lo = {std::max(1, p1 - b), p1};
    r.shoulder_hi = {p2, std::min(n, p2 + b)};
    r.method = method;
    return r;
}

UMatrix build_u(const WbrmInstance& inst, double e_alpha, int p1, int p2) {
    if (p1 < 1 || p2 <= p1 || p2 > inst.n) throw ValidationError("build_u: need 1 <= p1 < p2 <= n");

    UMatrix u;
    u.levels.reserve(static_cast<std::size_t>(inst.n - (p2 - p1 + 1)));
    for (int k = 1; k < p1; ++k) u.levels.push_back(k);
    for (int k = p2 + 1; k <= inst.n; ++k) u.levels.push_back(k);

    for (int k : u.levels)
        if (std::abs(e_alpha - static_cast<double>(k)) <= kEpsGuard) {
            std::ostringstream os;
            os << "resonance guard: e_alpha=" << e_alpha << " hits outside level " << k;
            throw ResonanceError(os.str());
        }

    const int m = static_cast<int>(u.levels.size());
    u.m = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < m; ++r) {
        const int i = u.levels[static_cast<std::size_t>(r)];
        for (int c = 0; c < m; ++c) {
            const int j = u.levels[static_cast<std::size_t>(c)];
            const int d = std::abs(i - j);
            if (d == 0 || d > inst.b) continue;
            const double num = inst.lambda * inst.v.at(i, j);
            if (num == 0.0) continue;
            u.m(r, c) = num / (e_alpha - static_cast<double>(i));
        }
    }
    return u;
}

SMatrices build_s_matrices(const WbrmInstance& inst, double e_alpha) {
    const int k0 = floor_level(e_alpha);
    if (k0 <= 1 || k0 >= inst.n)
        throw ValidationError("build_s_matrices: need 1 < floor(e_alpha) < n");
    check_resonance_near(inst, e_alpha);

    SMatrices s;
    s.k0 = k0;
    s.s_p = BandedSymmetricMatrix(k0, std::min(inst.b, k0 - 1));
    const int nn = inst.n - k0;
    s.s_n = BandedSymmetricMatrix(nn, std::min(inst.b, nn - 1));

    for (int d = 1; d <= s.s_p.half_bandwidth(); ++d)
        for (int i = 1; i <= k0 - d; ++i) {
            const double num = inst.lambda * inst.v.band(d, i);
            if (num == 0.0) continue;
            s.s_p.band(d, i) =
                num / std::sqrt((e_alpha - static_cast<double>(i)) * (e_alpha - static_cast<double>(i + d)));
        }
    for (int d = 1; d <= s.s_n.half_bandwidth(); ++d)
        for (int i = 1; i <= nn - d; ++i) {
            const int gi = k0 + i;
            const double num = inst.lambda * inst.v.band(d, gi);
            if (num == 0.0) continue;
            s.s_n.band(d, i) =
                num / std::sqrt((static_cast<double>(gi) - e_alpha) * (static_cast<double>(gi + d) - e_alpha));
        }
    return s;
}

BandedSymmetricMatrix shifted_identity(const BandedSymmetricMatrix& s, double sign) {
    BandedSymmetricMatrix out(s.dim(), s.half_bandwidth());
    for (int i = 1; i <= s.dim(); ++i) out.diag(i) = 1.0 + sign * s.diag(i);
    for (int d = 1; d <= s.half_bandwidth(); ++d)
        for (int i = 1; i <= s.dim() - d; ++i) out.band(d, i) = sign * s.band(d, i);
    return out;
}

namespace {

// Flat working upper band, reused across calls so the hot path never touches
// the allocator: w[(i-1)*stride + d] holds element (i, i+d) of the rows not
// yet eliminated. Rows are produced lazily just ahead of the elimination
// front, so a scan that fails early never pays for the rest of the matrix.
std::vector<double>& scan_workspace() {
    thread_local std::vector<double> w;
    return w;
}

// fill_row(i, row, len) writes the diagonal into row[0] and the band into
// row[1..len] for scan row i.
template <typename Filler>
ScanResult scan_kernel(int n, int b, double tau, bool collect_pivots, Filler&& fill_row) {
    std::vector<double>& w = scan_workspace();
    const int stride = b + 1;
    w.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(stride));

    int filled = 0;
    auto ensure_filled = [&](int upto) {
        for (int j = filled + 1; j <= upto; ++j) {
            double* row = &w[static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(stride)];
            const int len = std::min(b, n - j);
            fill_row(j, row, len);
            for (int d = len + 1; d <= b; ++d) row[d] = 0.0;
        }
        if (upto > filled) filled = upto;
    };

    ScanResult result;
    for (int i = 1; i <= n; ++i) {
        ensure_filled(std::min(n, i + b));
        const double* row = &w[static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(stride)];
        const double y = row[0];
        if (collect_pivots) result.pivots.push_back(y);
        if (y <= tau) {
            result.fail_index = i;
            return result;
        }
        const int len = std::min(b, n - i);
        for (int d1 = 1; d1 <= len; ++d1) {
            const double a = row[d1];
            if (a == 0.0) continue;
            double* target = &w[static_cast<std::size_t>(i + d1 - 1) * static_cast<std::size_t>(stride)];
            // Diagonal update as a^2/y so the b=1 pivots reproduce the scalar
            // recursion y' = 1 - xi^2/y bit for bit.
            target[0] -= a * a / y;
            const double f = a / y;
            for (int d2 = d1 + 1; d2 <= len; ++d2) target[d2 - d1] -= f * row[d2];
        }
    }
    return result;  // sentinel
}

ScanResult scan_matrix(const BandedSymmetricMatrix& m, double diag_shift, double sign,
                       ScanDirection direction, double tau, bool collect_pivots) {
    const int n = m.dim();
    const int b = m.half_bandwidth();
    const bool reversed = direction == ScanDirection::bottom_up;
    auto fill = [&](int i, double* row, int len) {
        const int src = reversed ? n + 1 - i : i;
        row[0] = diag_shift + sign * m.diag(src);
        for (int d = 1; d <= len; ++d)
            row[d] = sign * (reversed ? m.band(d, src - d) : m.band(d, src));
    };
    ScanResult r = scan_kernel(n, b, tau, collect_pivots, fill);
    if (reversed && r.fail_index != 0) r.fail_index = n + 1 - r.fail_index;
    return r;
}

}  // namespace

ScanResult pivot_scan(const BandedSymmetricMatrix& m, ScanDirection direction, double tau,
                      bool collect_pivots) {
    return scan_matrix(m, 0.0, 1.0, direction, tau, collect_pivots);
}

ScanResult pivot_scan_shifted(const BandedSymmetricMatrix& s, double sign, ScanDirection direction,
                              double tau, bool collect_pivots) {
    return scan_matrix(s, 1.0, sign, direction, tau, collect_pivots);
}

namespace {

// Pass/fail of the decoupled convergence test on each side, evaluated with
// symmetric eigensolves (independent of the pivot elimination).
struct SideThresholds {
    int p1_max;  // largest p1 in [1, k0] whose lower block passes
    int p2_min;  // smallest p2 in [k0+1, n] whose upper block passes
};

SideThresholds side_thresholds(const SMatrices& s, int n) {
    const int k0 = s.k0;

    auto pass_low = [&](int p1) {
        if (p1 <= 1) return true;
        return spectral_radius_banded(s.s_p.leading_block(p1 - 1)) < 1.0;
    };
    auto pass_high = [&](int p2) {
        if (p2 >= n) return true;
        return spectral_radius_banded(s.s_n.trailing_block(p2 + 1 - k0)) < 1.0;
    };

    // Both indicators are monotone (Cauchy interlacing: growing a principal
    // block never shrinks the spectral radius), so bisection finds the edge.
    int p1_max;
    if (pass_low(k0)) {
        p1_max = k0;
    } else {
        int lo = 1, hi = k0;  // pass_low(lo), !pass_low(hi)
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            (pass_low(mid) ? lo : hi) = mid;
        }
        p1_max = lo;
    }

    int p2_min;
    if (pass_high(k0 + 1)) {
        p2_min = k0 + 1;
    } else {
        int lo = k0 + 1, hi = n;  // !pass_high(lo), pass_high(hi)
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            (pass_high(mid) ? hi : lo) = mid;
        }
        p2_min = hi;
    }
    return {p1_max, p2_min};
}

// Best passing position at a given width: center closest to e, then lower p1.
std::optional<int> best_position(const std::vector<int>& passing, int w, double e) {
    if (passing.empty()) return std::nullopt;
    int best = passing.front();
    double best_dist = std::abs(best + 0.5 * w - e);
    for (int p1 : passing) {
        const double dist = std::abs(p1 + 0.5 * w - e);
        if (dist < best_dist) {
            best = p1;
            best_dist = dist;
        }
    }
    return best;
}

}  // namespace

NptRegion npt_oracle(const WbrmInstance& inst, double e_alpha) {
    check_interior(inst, e_alpha);
    const SMatrices s = build_s_matrices(inst, e_alpha);
    const int k0 = s.k0;
    const int n = inst.n;
    const int b = inst.b;

    const SideThresholds th = side_thresholds(s, n);
    const int w_dec = th.p2_min - th.p1_max;

    // Widths below b keep the two outside blocks coupled through the band
    // corner, so the test runs on the full U. When the decoupled width
    // already exceeds b these small widths cannot pass (any passing interval
    // would make some enclosing width-b interval pass too) and are skipped.
    if (w_dec <= b) {
        for (int w = 1; w < b; ++w) {
            const int lo = std::max(1, k0 + 1 - w);
            const int hi = std::min(k0, n - w);
            std::vector<int> passing;
            for (int p1 = lo; p1 <= hi; ++p1) {
                const UMatrix u = build_u(inst, e_alpha, p1, p1 + w);
                if (spectral_radius(u.m) < 1.0) passing.push_back(p1);
            }
            if (auto best = best_position(passing, w, e_alpha))
                return make_region(*best, *best + w, n, b, NptMethod::oracle);
        }
        const int w = std::max(b, w_dec);
        const int lo = std::max({1, k0 + 1 - w, th.p2_min - w});
        const int hi = std::min({k0, n - w, th.p1_max});
        std::vector<int> passing;
        for (int p1 = lo; p1 <= hi; ++p1) passing.push_back(p1);
        if (auto best = best_position(passing, w, e_alpha))
            return make_region(*best, *best + w, n, b, NptMethod::oracle);
        throw SearchError("npt_oracle: no admissible interval at the decoupled width");
    }

    const int cap = n - 2 * (b + 2);
    if (w_dec > cap) {
        std::ostringstream os;
        os << "npt_oracle: no interval up to width " << cap << " passes (needs " << w_dec << ")";
        throw SearchError(os.str());
    }
    return make_region(th.p1_max, th.p2_min, n, b, NptMethod::oracle);
}

NptRegion npt_iterative(const WbrmInstance& inst, double e_alpha) {
    check_interior(inst, e_alpha);
    check_resonance_near(inst, e_alpha);
    const int n = inst.n;
    const int b = inst.b;
    const int k0 = floor_level(e_alpha);
    const int nn = n - k0;

    // The I +- S rows are produced straight from the instance inside the scan
    // (identical arithmetic to scanning the assembled matrices, without the
    // O(N b) assembly when the elimination stops early).
    auto scan_low = [&](double sign) {
        auto fill = [&](int i, double* row, int len) {
            row[0] = 1.0;
            for (int d = 1; d <= len; ++d) {
                const double num = inst.lambda * inst.v.band(d, i);
                row[d] = num == 0.0
                             ? 0.0
                             : sign * num /
                                   std::sqrt((e_alpha - i) * (e_alpha - static_cast<double>(i + d)));
            }
        };
        return scan_kernel(k0, std::min(b, k0 - 1), kPivotTau, false, fill);
    };
    // Bottom-up over the levels above e_alpha, expressed as a reversed
    // top-down scan: row i covers global level n + 1 - i.
    auto scan_high = [&](double sign) {
        auto fill = [&](int i, double* row, int len) {
            const int g = n + 1 - i;
            row[0] = 1.0;
            for (int d = 1; d <= len; ++d) {
                const double num = inst.lambda * inst.v.band(d, g - d);
                row[d] = num == 0.0
                             ? 0.0
                             : sign * num /
                                   std::sqrt((static_cast<double>(g - d) - e_alpha) *
                                             (static_cast<double>(g) - e_alpha));
            }
        };
        return scan_kernel(nn, std::min(b, nn - 1), kPivotTau, false, fill);
    };

    // Candidate from one scan: the largest boundary whose leading block stays
    // positive definite, i.e. the failing row itself (blocks 1..i_c-1 pass).
    const ScanResult plus_p = scan_low(+1.0);
    const ScanResult minus_p = scan_low(-1.0);
    const int cand_p1_plus = plus_p.fail_index == 0 ? k0 : plus_p.fail_index;
    const int cand_p1_minus = minus_p.fail_index == 0 ? k0 : minus_p.fail_index;
    // Both I+S and I-S must stay positive definite, so take the stricter side.
    const int p1 = std::min(cand_p1_plus, cand_p1_minus);

    const ScanResult plus_n = scan_high(+1.0);
    const ScanResult minus_n = scan_high(-1.0);
    const int cand_p2_plus = plus_n.fail_index == 0 ? k0 + 1 : n + 1 - plus_n.fail_index;
    const int cand_p2_minus = minus_n.fail_index == 0 ? k0 + 1 : n + 1 - minus_n.fail_index;
    const int p2 = std::max(cand_p2_plus, cand_p2_minus);

    if (p2 - p1 <= inst.b) {
        // Elimination is only valid when the region spans the band; defer to
        // the ordinary method.
        return npt_oracle(inst, e_alpha);
    }
    return make_region(p1, p2, inst.n, inst.b, NptMethod::iterative);
}

RecursionResult recursion_b1(const std::vector<double>& xi, double tau) {
    RecursionResult r;
    double y = 1.0;
    for (std::size_t i = 0;; ++i) {
        r.y.push_back(y);
        if (y <= tau) {
            r.stop_index = static_cast<int>(i + 1);
            if (std::abs(y) < tau) r.degenerate_at = r.stop_index;
            return r;
        }
        if (i >= xi.size()) return r;
        y = 1.0 - xi[i] * xi[i] / y;
    }
}

PathSummation path_summation_g(const WbrmInstance& inst, double e_alpha, int j_max, double tau) {
    if (inst.b != 1) throw ValidationError("path_summation_g: defined for b = 1");
    const SMatrices s = build_s_matrices(inst, e_alpha);
    if (j_max < 1 || j_max > s.k0) throw ValidationError("path_summation_g: j_max out of range");

    PathSummation out;
    out.g.push_back(0.0);
    for (int j = 1; j < j_max; ++j) {
        const double denom = 1.0 - out.g.back();
        if (std::abs(denom) < tau) {
            out.degenerate_at = j;
            break;
        }
        const double xi = s.s_p.band(1, j);
        out.g.push_back(xi * xi / denom);
    }
    return out;
}

double region_spectral_radius(const WbrmInstance& inst, double e_alpha, const NptRegion& region) {
    if (region.width() >= inst.b) {
        const SMatrices s = build_s_matrices(inst, e_alpha);
        double lo = 0.0, hi = 0.0;
        if (region.p1 > 1) lo = spectral_radius_banded(s.s_p.leading_block(region.p1 - 1));
        if (region.p2 < inst.n) hi = spectral_radius_banded(s.s_n.trailing_block(region.p2 + 1 - s.k0));
        return std::max(lo, hi);
    }
    return spectral_radius(build_u(inst, e_alpha, region.p1, region.p2).m);
}

std::string npt_csv_row(int alpha, double e_alpha, const NptRegion& region) {
    std::ostringstream os;
    os.precision(17);
    os << alpha << ',' << e_alpha << ',' << region.p1 << ',' << region.p2 << ','
       << region.width() << ',' << npt_method_name(region.method);
    return os.str();
}

}  // namespace wbrm
