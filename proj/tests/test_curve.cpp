#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fixture.hpp"
#include "seqtube/curve.hpp"

using namespace seqtube;

TEST_CASE("eta at integers is the corresponding basis vector") {
    const CurveContext& ctx = test_ctx();
    for (Index n = -3; n <= 3; ++n) {
        const SparseVec v = eta(ctx, static_cast<double>(n));
        CHECK(norm(axpy(-1.0, SparseVec::basis(n), v)) < 1e-10);
    }
}

TEST_CASE("eta support and coefficient formula") {
    const CurveContext& ctx = test_ctx();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> wide(-6.0, 6.0);
    for (int i = 0; i < 500; ++i) {
        const double t = wide(rng);
        const SparseVec v = eta(ctx, t);
        const Index n = static_cast<Index>(std::floor(t));
        for (const Entry& e : v.entries()) {
            CHECK(e.index >= n);
            CHECK(e.index <= n + 2);
            CHECK(e.value == Catch::Approx(h_eval(ctx.bump, t - e.index, 0)).margin(1e-14));
        }
    }
}

TEST_CASE("shift equivariance of eta") {
    const CurveContext& ctx = test_ctx();
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> wide(-6.0, 6.0);
    for (int i = 0; i < 200; ++i) {
        const double t = wide(rng);
        const Index n = static_cast<Index>(rng() % 9) - 4;
        const double gap =
            norm(axpy(-1.0, shift(n, eta(ctx, t)), eta(ctx, t + static_cast<double>(n))));
        CHECK(gap < 1e-14);
    }
}

TEST_CASE("eta derivatives match central differences") {
    const CurveContext& ctx = test_ctx();
    const double step = 1e-6;
    for (double t : {-1.3, -0.4, 0.25, 0.5, 1.8, 3.7}) {
        const SparseVec fd = scaled(1.0 / (2.0 * step),
                                    axpy(-1.0, eta(ctx, t - step), eta(ctx, t + step)));
        CHECK(norm(axpy(-1.0, eta_deriv(ctx, t), fd)) < 1e-7);
        const SparseVec fd2 = scaled(1.0 / (2.0 * step), axpy(-1.0, eta_deriv(ctx, t - step),
                                                              eta_deriv(ctx, t + step)));
        CHECK(norm(axpy(-1.0, eta_second(ctx, t), fd2)) < 1e-6);
    }
}

TEST_CASE("eta'(0) is a positive multiple of e_1") {
    const CurveContext& ctx = test_ctx();
    const SparseVec d = eta_deriv(ctx, 0.0);
    REQUIRE(d.support_size() == 1);
    CHECK(d.min_index() == 1);
    CHECK(d.coeff(1) > 0.0);
    CHECK(d.coeff(1) == Catch::Approx(h_eval(ctx.bump, -1.0, 1)).margin(1e-15));
}

TEST_CASE("phi and phi_inv") {
    CHECK(phi(0.0) == 0.0);
    CHECK(phi_inv(0.0) == 0.0);
    CHECK(phi(0.5) == Catch::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double t : {-0.99, -0.6, -0.1, 0.0, 0.2, 0.77, 0.999}) {
        CHECK(phi_inv(phi(t)) == Catch::Approx(t).margin(1e-12));
    }
    for (double s : {-1000.0, -2.5, -1e-9, 1e-9, 4.0, 1e6}) {
        // phi' ~ 8 s^2 near the endpoints, so rounding phi_inv(s) to one
        // ulp already perturbs the round trip by ~8|s| ulps
        CHECK(phi(phi_inv(s)) == Catch::Approx(s).epsilon(1e-12 + 1e-14 * std::fabs(s)));
        CHECK(std::fabs(phi_inv(s)) < 1.0);
    }
    CHECK_THROWS_AS(phi(1.0), std::domain_error);
    CHECK_THROWS_AS(phi(-1.2), std::domain_error);
    const double step = 1e-7;
    for (double t : {-0.7, 0.0, 0.4, 0.9}) {
        const double fd = (phi(t + step) - phi(t - step)) / (2.0 * step);
        CHECK(phi_deriv(t) == Catch::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("gamma is eta composed with phi") {
    const CurveContext& ctx = test_ctx();
    for (double t : {-0.9, -0.3, 0.0, 0.5, 0.85}) {
        CHECK(norm(axpy(-1.0, eta(ctx, phi(t)), gamma(ctx, t))) == 0.0);
        const double step = 1e-7;
        const SparseVec fd = scaled(1.0 / (2.0 * step),
                                    axpy(-1.0, gamma(ctx, t - step), gamma(ctx, t + step)));
        CHECK(norm(axpy(-1.0, gamma_deriv(ctx, t), fd)) < 1e-5 * norm(gamma_deriv(ctx, t)));
    }
}

TEST_CASE("rho0 matches a brute-force grid oracle") {
    const CurveContext& ctx = test_ctx();
    double best = 1e300;
    for (int i = 0; i <= 1000000; ++i) {
        const double t = i * 1e-6;
        const double a = h_eval(ctx.bump, t, 0), b = h_eval(ctx.bump, t - 1.0, 0);
        best = std::min(best, std::sqrt(a * a + b * b));
    }
    CHECK(ctx.rho0 == Catch::Approx(best).margin(1e-10));
    CHECK(ctx.rho0 > 0.5);
    CHECK(ctx.rho0 < 1.0);
}

TEST_CASE("norm extrema of eta over one period") {
    const CurveContext& ctx = test_ctx();
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double n = norm(eta(ctx, i * 1e-5));
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    CHECK(ctx.min_norm == Catch::Approx(lo).margin(1e-8));
    CHECK(ctx.sup_norm == Catch::Approx(hi).margin(1e-8));
    CHECK(ctx.min_norm > 0.0);
    CHECK(ctx.sup_norm >= 1.0);
}

TEST_CASE("arc length: positivity, additivity and linear growth") {
    const CurveContext& ctx = test_ctx();
    const double l1 = arc_length(ctx, 0.0, 1.0);
    CHECK(l1 == Catch::Approx(ctx.L1).epsilon(1e-12));
    CHECK(l1 >= std::sqrt(2.0));
    CHECK(arc_length(ctx, 0.0, 0.4) + arc_length(ctx, 0.4, 1.0) ==
          Catch::Approx(l1).epsilon(1e-10));
    for (int n : {2, 5, 10}) {
        CHECK(arc_length(ctx, 0.0, static_cast<double>(n)) ==
              Catch::Approx(n * l1).epsilon(1e-8));
    }
    CHECK(arc_length(ctx, 0.3, 0.3) == 0.0);
    CHECK_THROWS_AS(arc_length(ctx, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("arc length exceeds the chord") {
    const CurveContext& ctx = test_ctx();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> wide(-4.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        double a = wide(rng), b = wide(rng);
        if (a > b) std::swap(a, b);
        const double chord = norm(axpy(-1.0, eta(ctx, a), eta(ctx, b)));
        CHECK(arc_length(ctx, a, b) >= chord - 1e-10);
    }
}
