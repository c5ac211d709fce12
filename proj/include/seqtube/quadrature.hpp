/// Adaptive panel-bisecting Gauss-Legendre quadrature (15 points per panel).
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace seqtube {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<double, 15> kGl15Nodes = {
    -9.87992518020485377e-01, -9.37273392400705951e-01, -8.48206583410427206e-01,
    -7.24417731360170070e-01, -5.70972172608538830e-01, -3.94151347077563385e-01,
    -2.01194093997434514e-01, 0.00000000000000000e+00,  2.01194093997434514e-01,
    3.94151347077563385e-01,  5.70972172608538830e-01,  7.24417731360170070e-01,
    8.48206583410427206e-01,  9.37273392400705951e-01,  9.87992518020485377e-01};

inline constexpr std::array<double, 15> kGl15Weights = {
    3.07532419961186465e-02, 7.03660474881080689e-02, 1.07159220467171773e-01,
    1.39570677926153908e-01, 1.66269205816993781e-01, 1.86161000015561878e-01,
    1.98431485327111246e-01, 2.02578241925560898e-01, 1.98431485327111246e-01,
    1.86161000015561878e-01, 1.66269205816993781e-01, 1.39570677926153908e-01,
    1.07159220467171773e-01, 7.03660474881080689e-02, 3.07532419961186465e-02};

template <class F>
double gl15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 15; ++i) sum += kGl15Weights[i] * f(mid + hw * kGl15Nodes[i]);
    return hw * sum;
}

template <class F>
double adaptive_rec(F&& f, double a, double b, double tol, double whole, int depth) {
    if (depth <= 0)
        throw QuadratureError("adaptive quadrature: panel-subdivision budget exhausted on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid);
    const double right = gl15(f, mid, b);
    if (std::fabs(left + right - whole) <= tol) return left + right;
    return adaptive_rec(f, a, mid, 0.5 * tol, left, depth - 1) +
           adaptive_rec(f, mid, b, 0.5 * tol, right, depth - 1);
}

}  // namespace detail

/// Integrates f over [a, b] to absolute tolerance abs_tol. Throws
/// QuadratureError when the subdivision budget runs out before convergence.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (a == b) return 0.0;
    if (!(abs_tol > 0.0)) throw QuadratureError("integrate: tolerance must be positive");
    return detail::adaptive_rec(f, a, b, abs_tol, detail::gl15(f, a, b), max_depth);
}

}  // namespace seqtube
