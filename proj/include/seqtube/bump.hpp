/// The smooth compactly supported bump h and its derivative g.
///
/// g is a fixed linear combination of three dilated mollifier windows,
///     g = A*psi_(-2,-1) + B*psi_(-3/2,0) + C*psi_(0,1),
/// with the coefficients determined by three integral conditions: g must
/// integrate to 0 over [-2,-1], to 1 over [-1,0], and to 0 over [-2,1].
/// h is the antiderivative of g starting at -2, so h(0) = 1, h vanishes
/// outside [-2,1], h is strictly increasing on [-1,0[ and strictly
/// decreasing on ]0,1[.
///
/// All defining integrals are computed by adaptive Gauss-Legendre
/// quadrature. For fast repeated evaluation (the ODE integrator calls h
/// inside its inner loop) the table additionally stores a piecewise
/// Chebyshev model of g per breakpoint-aligned subinterval, whose exact
/// polynomial antiderivative provides h; the model matches the analytic
/// windows to ~1e-13 and is cross-checked against quadrature in the tests.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "seqtube/quadrature.hpp"

namespace seqtube {

/// Mollifier: exp(-1/(1-t^2)) on ]-1,1[, zero elsewhere. Evaluates as 0
/// once 1-t^2 <= 1e-12; the true value there is far below underflow.
inline double psi(double t) {
    const double u = 1.0 - t * t;
    if (u <= 1e-12) return 0.0;
    return std::exp(-1.0 / u);
}

/// First or second analytic derivative of psi.
inline double psi_deriv(double t, int order) {
    if (order != 1 && order != 2) throw std::invalid_argument("psi_deriv: order must be 1 or 2");
    const double u = 1.0 - t * t;
    if (u <= 1e-12) return 0.0;
    const double p = std::exp(-1.0 / u);
    const double w = -2.0 * t / (u * u);  // (d/dt)(-1/u)
    if (order == 1) return p * w;
    // psi'' = psi * (w^2 + w'), w' = -2/u^2 - 8 t^2 / u^3
    const double wp = -2.0 / (u * u) - 8.0 * t * t / (u * u * u);
    return p * (w * w + wp);
}

/// Window translate/dilate of psi: positive exactly on ]a,b[.
inline double psi_window(double a, double b, double t) {
    if (!(a < b)) throw std::invalid_argument("psi_window: requires a < b");
    return psi(-1.0 + 2.0 * (t - a) / (b - a));
}

inline double psi_window_deriv(double a, double b, double t, int order) {
    if (!(a < b)) throw std::invalid_argument("psi_window_deriv: requires a < b");
    const double scale = 2.0 / (b - a);
    const double u = -1.0 + scale * (t - a);
    double s = scale;
    for (int k = 1; k < order; ++k) s *= scale;
    return s * psi_deriv(u, order);
}

namespace detail {

/// Piecewise Chebyshev model of g on [-2,1]: 192 uniform subintervals of
/// width 1/64, aligned with the analytic breakpoints {-2,-3/2,-1,0,1}.
/// Stores per subinterval the degree-16 series for g, its derivative
/// series, and its exact antiderivative series anchored to the running
/// cumulative integral (which is h).
struct ChebModel {
    static constexpr int kSubs = 192;
    static constexpr int kDeg = 16;  // 17 coefficients
    static constexpr double kLo = -2.0;
    static constexpr double kHi = 1.0;
    static constexpr double kWidth = 3.0 / kSubs;

    struct Sub {
        std::array<double, kDeg + 1> g;
        std::array<double, kDeg> gp;      // derivative series (degree 15)
        std::array<double, kDeg + 2> h;   // antiderivative series (degree 17)
    };
    std::vector<Sub> subs;
    double h_total = 0.0;  // cumulative integral at +1 (analytically 0)

    static double clenshaw(const double* c, int n, double u) {
        double b1 = 0.0, b2 = 0.0;
        for (int k = n - 1; k >= 1; --k) {
            double b0 = 2.0 * u * b1 - b2 + c[k];
            b2 = b1;
            b1 = b0;
        }
        return u * b1 - b2 + c[0];
    }

    int sub_index(double t) const {
        int j = static_cast<int>((t - kLo) / kWidth);
        if (j < 0) j = 0;
        if (j >= kSubs) j = kSubs - 1;
        return j;
    }

    double local(double t, int j) const {
        const double a = kLo + j * kWidth;
        return (t - a) / (0.5 * kWidth) - 1.0;
    }

    // g and every derivative vanish exactly at t = 0 (both adjacent
    // windows end there); the model only gets within ~1e-15 of that, and
    // eta'(0) being an exact multiple of e_1 matters downstream.
    double eval_g(double t) const {
        if (t <= kLo || t >= kHi || t == 0.0) return 0.0;
        int j = sub_index(t);
        return clenshaw(subs[j].g.data(), kDeg + 1, local(t, j));
    }

    double eval_gp(double t) const {
        if (t <= kLo || t >= kHi || t == 0.0) return 0.0;
        int j = sub_index(t);
        return clenshaw(subs[j].gp.data(), kDeg, local(t, j));
    }

    double eval_h(double t) const {
        if (t <= kLo || t >= kHi) return 0.0;
        int j = sub_index(t);
        return clenshaw(subs[j].h.data(), kDeg + 2, local(t, j));
    }
};

}  // namespace detail

/// The bump function h, its derivative g, the window coefficients A, B, C
/// and the quadrature metadata that produced them. Immutable after
/// construction; all evaluations are pure.
struct BumpTable {
    double A = 0.0;  // coefficient of psi_(-2,-1), negative
    double B = 0.0;  // coefficient of psi_(-3/2,0), positive
    double C = 0.0;  // coefficient of psi_(0,1), negative
    /// Definite integrals of g over [-2,-3/2], [-3/2,-1], [-1,0], [0,1].
    std::array<double, 4> panel_integrals{};
    double quad_tol = 0.0;
    detail::ChebModel model;
};

/// g(t) (order 0) or g'(t) (order 1) from the analytic window formulas.
inline double g_eval(const BumpTable& table, double t, int order) {
    if (order != 0 && order != 1) throw std::invalid_argument("g_eval: order must be 0 or 1");
    if (t <= -2.0 || t >= 1.0) return 0.0;
    if (order == 0)
        return table.A * psi_window(-2.0, -1.0, t) + table.B * psi_window(-1.5, 0.0, t) +
               table.C * psi_window(0.0, 1.0, t);
    return table.A * psi_window_deriv(-2.0, -1.0, t, 1) +
           table.B * psi_window_deriv(-1.5, 0.0, t, 1) +
           table.C * psi_window_deriv(0.0, 1.0, t, 1);
}

/// Determines A, B, C and the panel integrals by adaptive quadrature, and
/// builds the fast piecewise-Chebyshev evaluation model.
inline BumpTable compute_constants(double quad_tol = 1e-12) {
    if (!(quad_tol > 0.0)) throw std::invalid_argument("compute_constants: quad_tol must be > 0");
    BumpTable table;
    table.quad_tol = quad_tol;

    const auto w_left = [](double t) { return psi_window(-2.0, -1.0, t); };
    const auto w_mid = [](double t) { return psi_window(-1.5, 0.0, t); };
    const auto w_right = [](double t) { return psi_window(0.0, 1.0, t); };

    const double mid_on_m1_0 = integrate(w_mid, -1.0, 0.0, quad_tol);
    table.B = 1.0 / mid_on_m1_0;
    const double left_full = integrate(w_left, -2.0, -1.0, quad_tol);
    const double mid_on_m32_m1 = integrate(w_mid, -1.5, -1.0, quad_tol);
    table.A = -table.B * mid_on_m32_m1 / left_full;
    const double right_full = integrate(w_right, 0.0, 1.0, quad_tol);
    table.C = -1.0 / right_full;

    const auto g = [&table](double t) { return g_eval(table, t, 0); };
    const double breakpoints[5] = {-2.0, -1.5, -1.0, 0.0, 1.0};
    for (int i = 0; i < 4; ++i)
        table.panel_integrals[i] = integrate(g, breakpoints[i], breakpoints[i + 1], quad_tol);

    // Chebyshev model: interpolate g per subinterval, differentiate and
    // antidifferentiate the series exactly.
    using M = detail::ChebModel;
    table.model.subs.resize(M::kSubs);
    constexpr int N = M::kDeg + 1;
    std::array<double, N> nodes;
    for (int j = 0; j < N; ++j) nodes[j] = std::cos(M_PI * (j + 0.5) / N);
    double cum = 0.0;
    for (int s = 0; s < M::kSubs; ++s) {
        auto& sub = table.model.subs[s];
        const double a = M::kLo + s * M::kWidth;
        const double hw = 0.5 * M::kWidth;
        std::array<double, N> fv;
        for (int j = 0; j < N; ++j) fv[j] = g(a + hw * (nodes[j] + 1.0));
        for (int k = 0; k < N; ++k) {
            double sum = 0.0;
            for (int j = 0; j < N; ++j) sum += fv[j] * std::cos(M_PI * k * (j + 0.5) / N);
            sub.g[k] = 2.0 / N * sum;
        }
        sub.g[0] *= 0.5;
        // derivative series on the reference interval, rescaled by 1/hw
        std::array<double, N + 1> d{};  // padded
        for (int k = M::kDeg; k >= 1; --k)
            d[k - 1] = (k + 1 <= M::kDeg ? d[k + 1] : 0.0) + 2.0 * k * sub.g[k];
        d[0] *= 0.5;
        for (int k = 0; k < M::kDeg; ++k) sub.gp[k] = d[k] / hw;
        // antiderivative series scaled by hw, anchored so value at the left
        // endpoint equals the running cumulative integral
        std::array<double, M::kDeg + 2> hcoef{};
        for (int k = 1; k <= M::kDeg + 1; ++k) {
            // sub.g[0] stores the halved constant coefficient; the
            // antiderivative recurrence needs the unhalved one
            const double prev = (k == 1) ? 2.0 * sub.g[0] : sub.g[k - 1];
            const double next = (k + 1 <= M::kDeg) ? sub.g[k + 1] : 0.0;
            hcoef[k] = hw * (prev - next) / (2.0 * k);
        }
        double at_left = 0.0;
        for (int k = 1; k <= M::kDeg + 1; ++k) at_left += (k % 2 ? -hcoef[k] : hcoef[k]);
        hcoef[0] = cum - at_left;
        sub.h = hcoef;
        double at_right = 0.0;
        for (int k = 0; k <= M::kDeg + 1; ++k) at_right += hcoef[k];
        cum = at_right;
    }
    table.model.h_total = cum;
    return table;
}

/// h(t) (order 0, via the Chebyshev antiderivative model), h'(t) = g(t)
/// (order 1, same code path as g_eval) or h''(t) = g'(t) (order 2).
inline double h_eval(const BumpTable& table, double t, int order) {
    switch (order) {
        case 0:
            if (t <= -2.0 || t >= 1.0) return 0.0;
            return table.model.eval_h(t);
        case 1:
            return g_eval(table, t, 0);
        case 2:
            return g_eval(table, t, 1);
        default:
            throw std::invalid_argument("h_eval: order must be 0, 1 or 2");
    }
}

}  // namespace seqtube
