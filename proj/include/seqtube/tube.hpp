/// Tubular neighborhood of the curve eta: distance to the curve, the
/// normal-bundle parametrizations Psi and Phi, the inverse chart, the
/// smooth projection tau onto the gamma parameter, and empirical
/// validation of a tube radius rho.
///
/// The nearest-point search exploits the support locality of eta: the
/// minimizer of s -> ||eta(s) - p|| lies within 3 of the index of the
/// largest coefficient of p, so the search scans a fixed set of unit
/// windows [n, n+1] (dense sampling, golden-section, Newton polish on the
/// stationarity condition <eta'(s), eta(s) - p> = 0).
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqtube/curve.hpp"
#include "seqtube/rotation.hpp"
#include "seqtube/seqvec.hpp"

namespace seqtube {

struct TubeError : std::runtime_error {
    enum class Kind { outside_tube, no_convergence, no_valid_radius };
    Kind kind;
    TubeError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct ProbeSettings {
    double s_step = 0.1;        // parameter grid step on [0, 4]
    int n_dirs = 6;             // random normal directions per grid point
    std::array<double, 3> radius_fractions{0.3, 0.6, 0.9};
    unsigned seed = 20240817;
    double recover_tol = 1e-6;  // |recovered s - planted s| bound
    double margin = 1e-9;       // required squared-distance gap to rival minima
};

struct ProbeReport {
    double initial_candidate = 0.0;
    double accepted_rho = 0.0;
    int halvings = 0;
    long probes = 0;           // probes run for the accepted radius
    long failures = 0;         // failures recorded for the accepted radius
    ProbeSettings settings;
};

struct TubeChart {
    CurveContext ctx;
    double rho = 0.0;
    double newton_tol = 1e-12;
    ProbeReport probe_report;
};

struct NormalPoint {
    double t;     // curve parameter on the eta scale
    SparseVec x;  // normal offset in {eta'(0)}^perp
};

namespace detail {

struct WindowMin {
    double s;
    double dist2;
};

/// Squared distance from p to eta(s), accumulated as a sum of squared
/// residuals (never as a difference of large terms, which would cap the
/// accuracy of small distances at sqrt(eps)).
inline double dist2_at(const CurveContext& ctx, const SparseVec& p, double s) {
    const auto f = curve_frame(ctx, s);
    double acc = 0.0;
    bool hit[3] = {false, false, false};
    for (const Entry& e : p.entries()) {
        const Index d = e.index - f.n;
        if (d >= 0 && d < 3) {
            const double r = f.h[d] - e.value;
            acc += r * r;
            hit[d] = true;
        } else {
            acc += e.value * e.value;
        }
    }
    for (int i = 0; i < 3; ++i)
        if (!hit[i]) acc += f.h[i] * f.h[i];
    return acc;
}

/// d/ds (1/2)||eta(s)-p||^2 = <eta'(s), eta(s)-p> and its s-derivative.
inline void stationarity(const CurveContext& ctx, const SparseVec& p, double s,
                         double* value, double* slope) {
    const auto f = curve_frame(ctx, s);
    double v = 0.0, d = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double r = f.h[i] - p.coeff(f.n + i);
        v += f.g[i] * r;
        d += f.gp[i] * r + f.g[i] * f.g[i];
    }
    *value = v;
    if (slope) *slope = d;
}

/// Minimizes ||eta(s)-p||^2 over the window [n, n+1]: dense sampling,
/// golden-section, then Newton polish on the stationarity condition.
inline WindowMin minimize_window(const CurveContext& ctx, const SparseVec& p, Index n) {
    const double a = static_cast<double>(n), b = a + 1.0;
    const auto f = [&](double s) { return dist2_at(ctx, p, s); };
    double s_best = a;
    // coarse localization only; the Newton polish below does the refinement
    double v_best = golden_min(f, a, b, 32, 1e-6, &s_best);
    // Newton polish within the window
    double s = s_best;
    for (int it = 0; it < 8; ++it) {
        double val, slope;
        stationarity(ctx, p, s, &val, &slope);
        if (!(slope > 0.0)) break;
        const double step = val / slope;
        const double s_next = std::clamp(s - step, a, b);
        if (s_next == s) break;
        s = s_next;
        if (std::fabs(step) < 1e-14 * std::max(1.0, std::fabs(s))) break;
    }
    // pick by stationarity residual: near the minimum the polish improves s
    // by far more than dist^2 can resolve, so comparing f() would discard it
    double val_g, val_n;
    stationarity(ctx, p, s_best, &val_g, nullptr);
    stationarity(ctx, p, s, &val_n, nullptr);
    if (s != s_best && std::fabs(val_n) <= std::fabs(val_g)) {
        s_best = s;
        v_best = f(s);
    }
    return {s_best, v_best};
}

/// Window range to scan for a point p: within 3 of its support.
inline void window_range(const SparseVec& p, Index* lo, Index* hi) {
    if (p.is_zero()) { *lo = 0; *hi = -1; return; }
    const Index m = p.dominant_index();
    Index l = std::min(p.min_index(), m) - 3;
    Index h = std::max(p.max_index(), m) + 2;
    if (h - l > 64) { l = m - 32; h = m + 32; }  // cap for pathological dust
    *lo = l;
    *hi = h;
}

struct ScanResult {
    double s = 0.0;
    double dist = 0.0;
    bool on_windows = false;  // false: far branch (orthogonal part of the curve)
    std::vector<WindowMin> window_minima;
};

inline ScanResult scan_curve(const CurveContext& ctx, const SparseVec& p) {
    ScanResult res;
    Index lo, hi;
    window_range(p, &lo, &hi);
    double best = ctx.min_norm * ctx.min_norm + inner(p, p);  // far-branch value
    for (Index n = lo; n <= hi; ++n) {
        const WindowMin wm = minimize_window(ctx, p, n);
        res.window_minima.push_back(wm);
        if (wm.dist2 < best) {
            best = wm.dist2;
            res.s = wm.s;
            res.on_windows = true;
        }
    }
    res.dist = std::sqrt(std::max(best, 0.0));
    return res;
}

/// One Newton run on the stationarity condition from a single seed. Accepts
/// only when the iteration converges near the seed to a point inside the
/// validated tube; since rho < rho0/2, rival strands of the curve sit at
/// distance >= rho0 - rho > rho, so an in-tube stationary point is the
/// unique global nearest point and acceptance is sound for any seed.
inline bool newton_from(const TubeChart& chart, const SparseVec& p, double seed,
                        double* s_out) {
    double s = seed;
    for (int it = 0; it < 12; ++it) {
        double val, slope;
        stationarity(chart.ctx, p, s, &val, &slope);
        if (!(slope > 0.0)) return false;
        const double step = val / slope;
        if (std::fabs(step) > 0.75) return false;
        s -= step;
        if (std::fabs(step) < 1e-13 * std::max(1.0, std::fabs(s))) {
            if (std::fabs(s - seed) <= 0.75 &&
                dist2_at(chart.ctx, p, s) < chart.rho * chart.rho) {
                *s_out = s;
                return true;
            }
            return false;
        }
    }
    return false;
}

/// Hint-free localized projection: Newton from seeds around the dominant
/// support index. A point inside the tube has its nearest parameter within
/// 1 of its dominant index (the dominant curve coefficient exceeds 0.6
/// while the normal offset is below rho), so the seeds cover the minimizer
/// with spacing <= 0.25 and the first in-tube convergence is the answer.
/// Returns false for points that are outside the tube or not localized;
/// callers fall back to the full window scan.
inline bool nearest_param_local(const TubeChart& chart, const SparseVec& p,
                                double* s_out) {
    if (p.is_zero()) return false;
    const double n = static_cast<double>(p.dominant_index());
    for (const double off : {0.25, -0.25, 0.75, -0.75, 0.5, -0.5})
        if (newton_from(chart, p, n + off, s_out)) return true;
    return false;
}

}  // namespace detail

/// Distance from p to the curve eta(R) (equivalently to gamma(]-1,1[)).
inline double dist_to_curve(const TubeChart& chart, const SparseVec& p) {
    return detail::scan_curve(chart.ctx, p).dist;
}

/// Parameter s (eta scale) of the unique nearest curve point; requires p
/// inside the validated tube.
inline double nearest_param(const TubeChart& chart, const SparseVec& p) {
    const auto res = detail::scan_curve(chart.ctx, p);
    if (!(res.dist < chart.rho))
        throw TubeError(TubeError::Kind::outside_tube,
                        "nearest_param: point is outside the validated tube");
    if (!res.on_windows)
        throw TubeError(TubeError::Kind::no_convergence,
                        "nearest_param: no candidate window produced a minimum");
    double val, slope;
    detail::stationarity(chart.ctx, p, res.s, &val, &slope);
    const double scale = norm(eta_deriv(chart.ctx, res.s)) * std::max(res.dist, 1.0);
    if (std::fabs(val) > chart.newton_tol * std::max(scale, 1e-300) + chart.newton_tol)
        throw TubeError(TubeError::Kind::no_convergence,
                        "nearest_param: stationarity residual did not converge");
    return res.s;
}

/// Newton continuation of the nearest parameter from a nearby hint; falls
/// back to the full window scan when the iteration is not safely convergent.
inline double nearest_param_hinted(const TubeChart& chart, const SparseVec& p,
                                   double s_hint) {
    double s = 0.0;
    if (detail::newton_from(chart, p, s_hint, &s)) return s;
    if (detail::nearest_param_local(chart, p, &s)) return s;
    return nearest_param(chart, p);
}

/// Smooth projection onto the gamma parameter: tau = phi^{-1}(s).
inline double tau(const TubeChart& chart, const SparseVec& p) {
    return phi_inv(nearest_param(chart, p));
}

/// Normal-bundle parametrization Psi(t, x) = (eta(t), R_t(x)).
inline std::pair<SparseVec, SparseVec> psi_map(const TubeChart& chart, double t,
                                               const SparseVec& x) {
    detail::require_normal_space(chart.ctx, x, "psi_map");
    return {eta(chart.ctx, t), rot_t(chart.ctx, t, x)};
}

/// Tube parametrization Phi(t, x) = eta(t) + R_t(x).
inline SparseVec phi_map(const TubeChart& chart, double t, const SparseVec& x) {
    detail::require_normal_space(chart.ctx, x, "phi_map");
    return axpy(1.0, eta(chart.ctx, t), rot_t(chart.ctx, t, x));
}

/// Inverse chart: p = Phi(s, y) with s the nearest parameter and
/// y = R_s^{-1}(p - eta(s)).
inline NormalPoint phi_inv(const TubeChart& chart, const SparseVec& p) {
    const double s = nearest_param(chart, p);
    SparseVec offset = axpy(-1.0, eta(chart.ctx, s), p);
    return {s, rot_t_inv(chart.ctx, s, offset)};
}

namespace detail {

inline std::vector<SparseVec> probe_directions(const ProbeSettings& settings) {
    std::mt19937_64 rng(settings.seed);
    std::uniform_int_distribution<int> pick_index(-3, 9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<SparseVec> dirs;
    while (static_cast<int>(dirs.size()) < settings.n_dirs) {
        SparseVec::Storage entries;
        for (int tries = 0; tries < 16 && entries.size() < 4; ++tries) {
            const Index k = pick_index(rng);
            if (k == 1) continue;  // stay inside {eta'(0)}^perp = {e_1}^perp
            bool dup = false;
            for (const Entry& e : entries) dup = dup || e.index == k;
            if (!dup) entries.push_back({k, gauss(rng)});
        }
        SparseVec d = SparseVec::from_entries(std::move(entries));
        const double n = norm(d);
        if (n < 1e-6) continue;
        dirs.push_back(scaled(1.0 / n, d));
    }
    return dirs;
}

/// Runs the injectivity/uniqueness probe grid for a candidate radius.
/// Each probe plants a point Phi(s, x) with ||x|| < rho and requires the
/// window scan to (a) recover s and (b) show no rival minimum: window
/// minimizers that do not coincide with the winner must be worse by the
/// configured squared-distance margin.
inline long probe_radius(const CurveContext& ctx, double rho,
                         const ProbeSettings& settings, long* probes_run) {
    const auto dirs = probe_directions(settings);
    long failures = 0, probes = 0;
    for (double s = 0.0; s <= 4.0 + 1e-12; s += settings.s_step) {
        for (const SparseVec& dir : dirs) {
            for (double frac : settings.radius_fractions) {
                ++probes;
                SparseVec x = scaled(frac * rho, dir);
                SparseVec p = axpy(1.0, eta(ctx, s), rot_t(ctx, s, x));
                const ScanResult res = scan_curve(ctx, p);
                bool ok = res.on_windows && std::fabs(res.s - s) <= settings.recover_tol;
                if (ok) {
                    const double best2 = res.dist * res.dist;
                    for (const WindowMin& wm : res.window_minima) {
                        if (std::fabs(wm.s - res.s) < 1e-5) continue;  // same minimizer
                        if (wm.dist2 < best2 + settings.margin) { ok = false; break; }
                    }
                }
                if (!ok) ++failures;
            }
        }
    }
    if (probes_run) *probes_run = probes;
    return failures;
}

}  // namespace detail

/// Validates a tube radius empirically: starts from safety * rho0/2 and
/// halves until the probe grid reports no uniqueness violation. The paper
/// guarantees some valid rho exists; exhausting the halving budget
/// therefore signals an implementation bug.
inline TubeChart estimate_rho(const CurveContext& ctx, double safety = 1.0,
                              const ProbeSettings& settings = {}) {
    if (!(safety > 0.0 && safety <= 1.0))
        throw std::invalid_argument("estimate_rho: safety must lie in ]0, 1]");
    TubeChart chart;
    chart.ctx = ctx;
    chart.probe_report.settings = settings;
    double rho = safety * 0.5 * ctx.rho0 * (1.0 - 1e-9);
    chart.probe_report.initial_candidate = rho;
    for (int halvings = 0; halvings <= 20; ++halvings) {
        long probes = 0;
        const long failures = detail::probe_radius(ctx, rho, settings, &probes);
        if (failures == 0) {
            chart.rho = rho;
            chart.probe_report.accepted_rho = rho;
            chart.probe_report.halvings = halvings;
            chart.probe_report.probes = probes;
            chart.probe_report.failures = 0;
            return chart;
        }
        rho *= 0.5;
    }
    throw TubeError(TubeError::Kind::no_valid_radius,
                    "estimate_rho: no valid radius after 20 halvings");
}

}  // namespace seqtube
