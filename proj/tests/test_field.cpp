#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fixture.hpp"
#include "seqtube/field.hpp"

using namespace seqtube;

namespace {

SparseVec random_normal_dir(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<Index> pick(-3, 8);
    for (;;) {
        SparseVec::Storage s;
        for (int i = 0; i < 4; ++i) {
            const Index k = pick(rng);
            if (k == 1) continue;
            bool dup = false;
            for (const Entry& e : s) dup = dup || e.index == k;
            if (!dup) s.push_back({k, gauss(rng)});
        }
        SparseVec v = SparseVec::from_entries(std::move(s));
        const double n = norm(v);
        if (n > 1e-6) return scaled(1.0 / n, v);
    }
}

}  // namespace

TEST_CASE("cutoff endpoints and smooth interior") {
    const FieldConfig& cfg = test_field_cfg();
    const double hw = cfg.cutoff_halfwidth;
    CHECK(cutoff(cfg, 0.0) == 1.0);
    CHECK(cutoff(cfg, hw) == 0.0);
    CHECK(cutoff(cfg, 2.0 * hw) == 0.0);
    CHECK(cutoff(cfg, -hw) == 0.0);
    CHECK(cutoff(cfg, 0.5 * hw) > 0.0);
    CHECK(cutoff(cfg, 0.5 * hw) < 1.0);
    // monotone decreasing in |u|
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double v = cutoff(cfg, hw * i / 100.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("field equals gamma' on the curve") {
    const FieldConfig& cfg = test_field_cfg();
    const CurveContext& ctx = test_ctx();
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ts(-0.9, 0.9);
    for (int i = 0; i < 300; ++i) {
        const double t = ts(rng);
        const SparseVec expect = gamma_deriv(ctx, t);
        const SparseVec got = field_eval(cfg, gamma(ctx, t));
        CHECK(norm(axpy(-1.0, expect, got)) < 1e-8 * norm(expect));
    }
}

TEST_CASE("field vanishes identically away from the curve") {
    const FieldConfig& cfg = test_field_cfg();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> amp(2.0, 8.0);
    for (int i = 0; i < 100; ++i) {
        const SparseVec p = scaled(amp(rng), random_normal_dir(rng));
        if (dist_to_curve(cfg.chart, p) >= 0.5 * cfg.chart.rho)
            CHECK(field_eval(cfg, p).is_zero());
    }
    CHECK(field_eval(cfg, scaled(10.0, SparseVec::basis(0))).is_zero());
}

TEST_CASE("branch consistency at the rho/2 seam") {
    const FieldConfig& cfg = test_field_cfg();
    const CurveContext& ctx = test_ctx();
    const double rho = cfg.chart.rho;
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> wide(-4.0, 4.0);
    std::uniform_real_distribution<double> frac(0.43, 0.57);
    for (int i = 0; i < 300; ++i) {
        const double s = wide(rng);
        const SparseVec p = phi_map(cfg.chart, s, scaled(frac(rng) * rho, random_normal_dir(rng)));
        const double d = dist_to_curve(cfg.chart, p);
        const double theta = cutoff(cfg, d * d);
        const SparseVec got = field_eval(cfg, p);
        if (theta == 0.0) {
            CHECK(got.is_zero());
        } else {
            const double t = tau(cfg.chart, p);
            CHECK(norm(axpy(-1.0, scaled(theta, gamma_deriv(ctx, t)), got)) < 1e-12);
        }
    }
}

TEST_CASE("hinted evaluation matches the unhinted scan") {
    const FieldConfig& cfg = test_field_cfg();
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> wide(-4.0, 4.0);
    std::uniform_real_distribution<double> frac(0.0, 0.45);
    for (int i = 0; i < 200; ++i) {
        const double s = wide(rng);
        const SparseVec p = phi_map(cfg.chart, s, scaled(frac(rng) * cfg.chart.rho,
                                                         random_normal_dir(rng)));
        const FieldEval plain = field_eval_full(cfg, p);
        REQUIRE(plain.s.has_value());
        double hint = *plain.s + 0.02;
        const FieldEval hinted = field_eval_full(cfg, p, &hint);
        CHECK(norm(axpy(-1.0, plain.f, hinted.f)) < 1e-9);
        CHECK(std::fabs(plain.dist - hinted.dist) < 1e-9);
    }
}

TEST_CASE("field magnitude is bounded by the cutoff times the curve speed") {
    const FieldConfig& cfg = test_field_cfg();
    const CurveContext& ctx = test_ctx();
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> wide(-4.0, 4.0);
    std::uniform_real_distribution<double> frac(0.0, 0.49);
    for (int i = 0; i < 200; ++i) {
        const double s = wide(rng);
        const SparseVec p = phi_map(cfg.chart, s, scaled(frac(rng) * cfg.chart.rho,
                                                         random_normal_dir(rng)));
        const FieldEval fe = field_eval_full(cfg, p);
        REQUIRE(fe.tau.has_value());
        const double bound = cutoff(cfg, fe.dist * fe.dist) * phi_deriv(*fe.tau) *
                             norm(eta_deriv(ctx, *fe.s));
        CHECK(norm(fe.f) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("directional second differences stabilize under step halving") {
    const FieldConfig& cfg = test_field_cfg();
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> wide(-4.0, 4.0);
    int probes = 0;
    for (int i = 0; i < 60 && probes < 25; ++i) {
        const double s = wide(rng);
        const SparseVec p = phi_map(cfg.chart, s, scaled(0.2 * cfg.chart.rho,
                                                         random_normal_dir(rng)));
        const SparseVec dir = random_normal_dir(rng);
        const Index watch = field_eval(cfg, p).dominant_index();
        const auto coord = [&](double step) {
            return field_eval(cfg, axpy(step, dir, p)).coeff(watch);
        };
        const auto second = [&](double step) {
            return (coord(step) - 2.0 * coord(0.0) + coord(-step)) / (step * step);
        };
        const double d1 = second(1e-3), d2 = second(5e-4);
        if (std::fabs(d1) < 1e-3) continue;
        ++probes;
        CHECK(std::fabs(d2 / d1 - 1.0) < 0.1);
    }
    CHECK(probes > 0);
}

TEST_CASE("tau is undefined outside the tube but present inside") {
    const FieldConfig& cfg = test_field_cfg();
    const FieldEval inside = field_eval_full(cfg, SparseVec::basis(0));
    CHECK(inside.tau.has_value());
    CHECK(std::fabs(*inside.tau) < 1e-9);
    const FieldEval outside = field_eval_full(cfg, scaled(6.0, SparseVec::basis(0)));
    CHECK_FALSE(outside.tau.has_value());
    CHECK(outside.f.is_zero());
}
