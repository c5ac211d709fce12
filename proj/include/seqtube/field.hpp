/// The smooth vector field f whose ODE x' = f(x) has the bounded
/// finite-lifetime solution gamma. Near the curve,
///     f(p) = theta(d(p)^2) * gamma'(tau(p)),
/// where d is the distance to the curve and theta a smooth cutoff with
/// theta(0) = 1 vanishing outside [-rho^2/4, rho^2/4]; away from the curve
/// (d >= rho/2) the field is zero. The two clauses agree on their overlap
/// because theta kills the first branch there.
#pragma once

#include <cmath>
#include <optional>

#include "seqtube/curve.hpp"
#include "seqtube/seqvec.hpp"
#include "seqtube/tube.hpp"

namespace seqtube {

struct FieldConfig {
    TubeChart chart;
    double cutoff_halfwidth;  // rho^2 / 4

    explicit FieldConfig(TubeChart chart_in)
        : chart(std::move(chart_in)), cutoff_halfwidth(chart.rho * chart.rho / 4.0) {}
};

/// Smooth cutoff theta(u) = exp(1 - 1/(1 - (4u/rho^2)^2)) for |4u/rho^2| < 1,
/// zero otherwise.
inline double cutoff(const FieldConfig& cfg, double u) {
    const double z = u / cfg.cutoff_halfwidth;
    const double w = 1.0 - z * z;
    if (w <= 1e-12) return 0.0;
    return std::exp(1.0 - 1.0 / w);
}

struct FieldEval {
    SparseVec f;
    double dist = 0.0;
    std::optional<double> s;    // nearest eta parameter, when inside the tube
    std::optional<double> tau;  // gamma parameter, when inside the tube
};

/// Full evaluation with diagnostics. A hint for the nearest parameter (from
/// a previous nearby evaluation) switches the projection to Newton
/// continuation, which the ODE integrator relies on.
inline FieldEval field_eval_full(const FieldConfig& cfg, const SparseVec& p,
                                 const double* s_hint = nullptr) {
    FieldEval out;
    const double rho = cfg.chart.rho;
    double s = 0.0;
    // Newton continuation from the hint, then the hint-free localized
    // projection; both accept only points verified to lie inside the tube.
    bool have_s = s_hint && detail::newton_from(cfg.chart, p, *s_hint, &s);
    if (!have_s) have_s = detail::nearest_param_local(cfg.chart, p, &s);
    if (have_s) {
        out.dist = std::sqrt(detail::dist2_at(cfg.chart.ctx, p, s));
    } else {
        // outside the tube, or not localized: the full window scan reports
        // the distance without throwing so callers can observe departure
        const auto res = detail::scan_curve(cfg.chart.ctx, p);
        out.dist = res.dist;
        if (!(res.dist < rho)) return out;  // zero branch; tau undefined out here
        s = res.s;
    }
    if (!(out.dist < rho)) return out;
    out.s = s;
    const double t = phi_inv(s);
    out.tau = t;
    if (out.dist >= 0.5 * rho) return out;  // theta vanishes; field is zero
    const double theta = cutoff(cfg, out.dist * out.dist);
    if (theta == 0.0) return out;
    out.f = scaled(theta * phi_deriv(t), eta_deriv(cfg.chart.ctx, s));
    return out;
}

inline SparseVec field_eval(const FieldConfig& cfg, const SparseVec& p) {
    return field_eval_full(cfg, p).f;
}

}  // namespace seqtube
