/// The bounded injective curve eta(t) = sum_k h(t-k) e_k in l2(Z), its
/// finite-lifetime reparametrization gamma = eta o phi with
/// phi(t) = t/(1-t^2), and the derived constants rho0 (normal separation
/// floor), L1 (arc length per period) and sup/min of ||eta||.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "seqtube/bump.hpp"
#include "seqtube/quadrature.hpp"
#include "seqtube/seqvec.hpp"

namespace seqtube {

struct CurveContext {
    BumpTable bump;
    double rho0 = 0.0;      // min over [0,1] of sqrt(h(t)^2 + h(t-1)^2)
    double L1 = 0.0;        // arc length of eta over one period
    double sup_norm = 0.0;  // max_t ||eta(t)||
    double min_norm = 0.0;  // min_t ||eta(t)||
};

namespace detail {

/// h, g and g' at the three support offsets of eta near parameter s.
/// The support of eta(s) is {n, n+1, n+2} with n = floor(s); coefficient
/// at n+i is h(s - n - i).
struct CurveFrame {
    Index n;
    std::array<double, 3> h, g, gp;
};

inline CurveFrame curve_frame(const CurveContext& ctx, double s) {
    CurveFrame f;
    const double fl = std::floor(s);
    f.n = static_cast<Index>(fl);
    const auto& m = ctx.bump.model;
    for (int i = 0; i < 3; ++i) {
        const double u = s - fl - i;
        if (u <= -2.0 || u >= 1.0) {
            f.h[i] = f.g[i] = f.gp[i] = 0.0;
        } else {
            f.h[i] = m.eval_h(u);
            f.g[i] = m.eval_g(u);
            f.gp[i] = m.eval_gp(u);
        }
    }
    return f;
}

}  // namespace detail

inline SparseVec eta(const CurveContext& ctx, double t) {
    const auto f = detail::curve_frame(ctx, t);
    SparseVec::Storage s;
    for (int i = 0; i < 3; ++i)
        if (f.h[i] != 0.0) s.push_back({f.n + i, f.h[i]});
    return SparseVec::from_entries(std::move(s));
}

inline SparseVec eta_deriv(const CurveContext& ctx, double t) {
    const auto f = detail::curve_frame(ctx, t);
    SparseVec::Storage s;
    for (int i = 0; i < 3; ++i)
        if (f.g[i] != 0.0) s.push_back({f.n + i, f.g[i]});
    return SparseVec::from_entries(std::move(s));
}

/// Second derivative of eta; used by the nearest-point Newton iteration.
inline SparseVec eta_second(const CurveContext& ctx, double t) {
    const auto f = detail::curve_frame(ctx, t);
    SparseVec::Storage s;
    for (int i = 0; i < 3; ++i)
        if (f.gp[i] != 0.0) s.push_back({f.n + i, f.gp[i]});
    return SparseVec::from_entries(std::move(s));
}

/// Diffeomorphism ]-1,1[ -> R used to give gamma its finite lifetime.
inline double phi(double t) {
    if (!(std::fabs(t) < 1.0)) throw std::domain_error("phi: requires |t| < 1");
    return t / (1.0 - t * t);
}

inline double phi_deriv(double t) {
    if (!(std::fabs(t) < 1.0)) throw std::domain_error("phi_deriv: requires |t| < 1");
    const double u = 1.0 - t * t;
    return (1.0 + t * t) / (u * u);
}

/// Closed-form inverse: the root of s*t^2 + t - s = 0 inside ]-1,1[,
/// written in the cancellation-free form 2s / (sqrt(1+4s^2) + 1).
inline double phi_inv(double s) {
    return 2.0 * s / (std::sqrt(1.0 + 4.0 * s * s) + 1.0);
}

inline SparseVec gamma(const CurveContext& ctx, double t) { return eta(ctx, phi(t)); }

inline SparseVec gamma_deriv(const CurveContext& ctx, double t) {
    return scaled(phi_deriv(t), eta_deriv(ctx, phi(t)));
}

namespace detail {

/// Grid scan plus golden-section refinement of a scalar function on [a,b].
template <class F>
double golden_min(F&& f, double a, double b, int grid, double tol_t, double* arg = nullptr) {
    double best_t = a, best_v = f(a);
    for (int i = 1; i <= grid; ++i) {
        const double t = a + (b - a) * i / grid;
        const double v = f(t);
        if (v < best_v) { best_v = v; best_t = t; }
    }
    double lo = std::max(a, best_t - (b - a) / grid);
    double hi = std::min(b, best_t + (b - a) / grid);
    const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_gr * (hi - lo), x2 = lo + inv_gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol_t) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - inv_gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + inv_gr * (hi - lo);
            f2 = f(x2);
        }
    }
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if (arg) *arg = fm < best_v ? mid : best_t;
    return std::min(fm, best_v);
}

inline double eta_norm_profile(const CurveContext& ctx, double t) {
    const auto f = curve_frame(ctx, t);
    return std::sqrt(f.h[0] * f.h[0] + f.h[1] * f.h[1] + f.h[2] * f.h[2]);
}

}  // namespace detail

inline double compute_rho0(const CurveContext& ctx) {
    const auto f = [&ctx](double t) {
        const double a = h_eval(ctx.bump, t, 0), b = h_eval(ctx.bump, t - 1.0, 0);
        return std::sqrt(a * a + b * b);
    };
    return detail::golden_min(f, 0.0, 1.0, 10000, 1e-12);
}

/// Arc length of eta between parameters t0 <= t1 by adaptive quadrature of
/// ||eta'||, with panels split at the half-integers where the analytic
/// pieces of g change.
inline double arc_length(const CurveContext& ctx, double t0, double t1) {
    if (!(t0 <= t1)) throw std::invalid_argument("arc_length: requires t0 <= t1");
    if (t0 == t1) return 0.0;
    const auto speed = [&ctx](double t) {
        const auto f = detail::curve_frame(ctx, t);
        return std::sqrt(f.g[0] * f.g[0] + f.g[1] * f.g[1] + f.g[2] * f.g[2]);
    };
    double total = 0.0;
    double a = t0;
    while (a < t1) {
        double b = std::min(t1, std::floor(a * 2.0) / 2.0 + 0.5);
        if (b <= a) b = std::min(t1, a + 0.5);
        total += integrate(speed, a, b, 1e-12);
        a = b;
    }
    return total;
}

/// Builds the full curve context: bump table plus the derived constants.
inline CurveContext make_curve_context(BumpTable bump) {
    CurveContext ctx;
    ctx.bump = std::move(bump);
    ctx.rho0 = compute_rho0(ctx);
    ctx.L1 = arc_length(ctx, 0.0, 1.0);
    const auto profile = [&ctx](double t) { return detail::eta_norm_profile(ctx, t); };
    const auto neg_profile = [&profile](double t) { return -profile(t); };
    ctx.sup_norm = -detail::golden_min(neg_profile, 0.0, 1.0, 10000, 1e-12);
    ctx.min_norm = detail::golden_min(profile, 0.0, 1.0, 10000, 1e-12);
    return ctx;
}

}  // namespace seqtube
