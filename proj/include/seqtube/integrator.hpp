/// Adaptive explicit integration of x' = f(x) over sparse states with the
/// Dormand-Prince 5(4) embedded pair and PI step control. The monitors
/// demonstrate the qualitative claims about the tracked solution: the
/// state stays norm-bounded while the accepted step collapses to the floor
/// near the lifetime boundary, with the support escaping to large indices.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "seqtube/curve.hpp"
#include "seqtube/field.hpp"
#include "seqtube/report.hpp"
#include "seqtube/seqvec.hpp"
#include "seqtube/tube.hpp"

namespace seqtube {

enum class TrajectoryStatus { completed, step_floor_reached, left_tube };

inline const char* to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::completed: return "completed";
        case TrajectoryStatus::step_floor_reached: return "step-floor-reached";
        case TrajectoryStatus::left_tube: return "left-tube";
    }
    return "?";
}

struct TrajectorySample {
    double time = 0.0;
    SparseVec state;
    double norm = 0.0;
    double dist = 0.0;                // distance to the curve
    std::optional<double> tau;        // present iff dist < rho
    double arclen = 0.0;              // accumulated chord length
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TrajectoryStatus status = TrajectoryStatus::completed;
    double final_time = 0.0;
    // running statistics over every accepted step (not just retained samples)
    double max_norm = 0.0;
    Index max_dominant_index = 0;
    bool dominant_index_monotone = true;
    long steps_accepted = 0;
    long steps_rejected = 0;
};

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double step_floor = 1e-14;      // accepted step below this ends the run
    // Dust pruning inside the stepper. Without it the state keeps a
    // roundoff-sized entry at every index it ever visited, and the cost of
    // each step grows with the dominant index.
    double drop_tol = 1e-16;
    // Accepted-state entries at least 3 behind the dominant index and below
    // this magnitude are discarded. The field vanishes identically on
    // coordinates the curve has already passed, so such entries are frozen
    // numerical residue (~1e-8 per coordinate at the default tolerances);
    // keeping them makes the support — and the per-step cost — grow
    // linearly with the dominant index on long runs.
    double frozen_tol = 1e-6;
    std::size_t max_samples = 20000;  // retained samples; thinned beyond this
    int forced_outputs = 0;         // uniform output times forced into the grid
    long max_steps = 400000000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double kB5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                                  -2187.0 / 6784,  11.0 / 84,  0.0};
inline constexpr double kB4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                                  -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct SampleRecorder {
    std::vector<TrajectorySample>& out;
    std::size_t cap;
    std::size_t stride = 1;
    std::size_t since_kept = 0;

    void push(TrajectorySample sample) {
        ++since_kept;
        if (since_kept < stride) return;
        since_kept = 0;
        out.push_back(std::move(sample));
        if (out.size() >= cap) {  // thin: keep every other sample, double stride
            std::size_t w = 0;
            for (std::size_t r = 0; r < out.size(); r += 2) out[w++] = std::move(out[r]);
            out.resize(w);
            stride *= 2;
        }
    }
};

}  // namespace detail

/// Integrates x' = f(x) from x0 up to t_end (or until the step floor or a
/// tube departure ends the run). The state is never re-projected onto the
/// curve; the finite lifetime has to emerge from the dynamics alone.
inline Trajectory integrate(const FieldConfig& cfg, const SparseVec& x0, double t_end,
                            const IntegrateOptions& opt = {}) {
    if (!(opt.rtol > 0.0 && opt.atol > 0.0))
        throw std::invalid_argument("integrate: rtol and atol must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");

    Trajectory traj;
    detail::SampleRecorder recorder{traj.samples, std::max<std::size_t>(opt.max_samples, 16)};

    double t = 0.0;
    SparseVec y = x0;
    double hint_value = 0.0;
    bool have_hint = false;

    FieldEval fe = field_eval_full(cfg, y);
    const bool started_in_tube = fe.dist < cfg.chart.rho;
    if (fe.s) { hint_value = *fe.s; have_hint = true; }

    double arclen = 0.0;
    Index last_dominant = y.is_zero() ? 0 : y.dominant_index();
    traj.max_norm = norm(y);
    traj.max_dominant_index = last_dominant;
    traj.samples.push_back({t, y, norm(y), fe.dist, fe.tau, arclen});

    const double f0_norm = norm(fe.f);
    double h = f0_norm > 0.0 ? std::min(0.01 / f0_norm, t_end) : t_end;

    double next_forced = opt.forced_outputs > 0 ? t_end / opt.forced_outputs : t_end;
    const double forced_step = next_forced;

    std::array<SparseVec, 7> k;
    k[0] = fe.f;
    double err_ratio_prev = 1.0;

    while (t < t_end) {
        if (traj.steps_accepted + traj.steps_rejected >= opt.max_steps) break;
        bool hit_forced = false;
        if (opt.forced_outputs > 0 && t + h >= next_forced - 1e-15) {
            h = next_forced - t;
            hit_forced = true;
        }
        if (t + h > t_end) { h = t_end - t; hit_forced = false; }

        // stages (k[0] is fresh from FSAL or the initial evaluation)
        bool stage_left_tube = false;
        double stage_dist = fe.dist;
        std::optional<double> stage_tau = fe.tau;
        for (int i = 1; i < 7; ++i) {
            std::array<double, 8> cs;
            std::array<const SparseVec*, 8> vs;
            cs[0] = 1.0;
            vs[0] = &y;
            for (int j = 0; j < i; ++j) {
                cs[j + 1] = h * detail::kA[i][j];
                vs[j + 1] = &k[j];
            }
            SparseVec yi = combine(std::span<const double>(cs.data(), i + 1),
                                   std::span<const SparseVec* const>(vs.data(), i + 1),
                                   opt.drop_tol);
            FieldEval fi = field_eval_full(cfg, yi, have_hint ? &hint_value : nullptr);
            if (fi.s) hint_value = *fi.s;
            if (i == 6) {  // stage at c=1 evaluates the candidate y_{n+1}
                stage_dist = fi.dist;
                stage_tau = fi.tau;
                if (started_in_tube && !(fi.dist < cfg.chart.rho)) stage_left_tube = true;
            }
            k[i] = std::move(fi.f);
        }

        // 5th-order solution and embedded error estimate
        std::array<double, 8> cs;
        std::array<const SparseVec*, 8> vs;
        cs[0] = 1.0;
        vs[0] = &y;
        for (int j = 0; j < 7; ++j) { cs[j + 1] = h * detail::kB5[j]; vs[j + 1] = &k[j]; }
        SparseVec y_new = combine(std::span<const double>(cs.data(), 8),
                                  std::span<const SparseVec* const>(vs.data(), 8),
                                  opt.drop_tol);
        std::array<double, 7> es;
        for (int j = 0; j < 7; ++j) es[j] = h * (detail::kB5[j] - detail::kB4[j]);
        std::array<const SparseVec*, 7> evs;
        for (int j = 0; j < 7; ++j) evs[j] = &k[j];
        const double err = norm(combine(std::span<const double>(es.data(), 7),
                                        std::span<const SparseVec* const>(evs.data(), 7)));
        const double tol = opt.atol + opt.rtol * std::max(norm(y), norm(y_new));
        const double ratio = err / tol;

        if (ratio <= 1.0) {
            if (stage_left_tube) traj.status = TrajectoryStatus::left_tube;
            const double chord = norm(axpy(-1.0, y, y_new));
            arclen += chord;
            t += h;
            y = std::move(y_new);
            ++traj.steps_accepted;
            k[0] = k[6];  // FSAL
            fe.dist = stage_dist;
            fe.tau = stage_tau;

            if (!y.is_zero()) {
                const Index dom = y.dominant_index();
                if (dom < last_dominant) traj.dominant_index_monotone = false;
                last_dominant = dom;
                traj.max_dominant_index = std::max(traj.max_dominant_index, dom);
                if (opt.frozen_tol > 0.0) y.prune_before(dom - 2, opt.frozen_tol);
            }
            const double yn = norm(y);
            traj.max_norm = std::max(traj.max_norm, yn);
            recorder.push({t, y, yn, stage_dist, stage_tau, arclen});

            if (traj.status == TrajectoryStatus::left_tube) break;
            if (hit_forced) next_forced += forced_step;

            const double fac = 0.9 * std::pow(std::max(ratio, 1e-10), -0.7 / 5.0) *
                               std::pow(std::max(err_ratio_prev, 1e-10), 0.4 / 5.0);
            err_ratio_prev = std::max(ratio, 1e-10);
            h *= std::clamp(fac, 0.2, 5.0);

            if (h < opt.step_floor && t < t_end) {
                traj.status = TrajectoryStatus::step_floor_reached;
                break;
            }
        } else {
            ++traj.steps_rejected;
            h *= std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 1.0);
            if (h < opt.step_floor) {
                traj.status = TrajectoryStatus::step_floor_reached;
                break;
            }
        }
    }

    traj.final_time = t;
    if (!traj.samples.empty() && traj.samples.back().time != t)
        traj.samples.push_back({t, y, norm(y), fe.dist, fe.tau, arclen});
    return traj;
}

/// Post-run monitors: boundedness against the curve's sup norm, chord arc
/// length against the exact quadrature along the curve, and the tracking
/// error against gamma at the projected parameter.
inline VerificationReport monitor(const Trajectory& traj, const CurveContext& ctx,
                                  const TubeChart& chart) {
    VerificationReport rep;
    rep.suite = "monitor";
    rep.require("sup of sampled norms <= sup_norm + 1e-4",
                traj.max_norm - ctx.sup_norm, 1e-4);

    double max_arclen_rel = 0.0;
    double max_track = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, traj.samples.size() / 400);
    for (std::size_t i = 0; i < traj.samples.size(); i += stride) {
        const TrajectorySample& s = traj.samples[i];
        if (!s.tau || !(*s.tau > 0.0)) continue;
        const double exact = arc_length(ctx, 0.0, phi(*s.tau));
        if (exact > 1e-3)
            max_arclen_rel = std::max(max_arclen_rel,
                                      std::fabs(s.arclen - exact) / exact);
        max_track = std::max(max_track, norm(axpy(-1.0, gamma(ctx, *s.tau), s.state)));
    }
    rep.require("arc length matches quadrature along the curve (relative)",
                max_arclen_rel, 1e-3);
    rep.require("tracking error ||state - gamma(tau(state))||", max_track, chart.rho);
    return rep;
}

}  // namespace seqtube
