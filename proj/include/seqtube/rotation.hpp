/// Rank-two rotations of the sequence space: the rotation taking a unit
/// vector v to a unit vector w while fixing the orthogonal complement of
/// span{v,w}, the curve-indexed rotations R_t aligning the reference
/// tangent eta'(0) with eta'(t), and the shift-conjugated maps Theta_n.
#pragma once

#include <cmath>
#include <stdexcept>

#include "seqtube/curve.hpp"
#include "seqtube/seqvec.hpp"

namespace seqtube {

/// Degeneracy guard: the rotation formula has denominator 1 + <v,w> and is
/// undefined for antipodal pairs. The margin turns the near-singular case
/// into a diagnosable error.
inline constexpr double kAntipodalMargin = 1e-9;

struct RotationPair {
    SparseVec v, w;
    double vw;

    RotationPair(SparseVec v_in, SparseVec w_in) : v(std::move(v_in)), w(std::move(w_in)) {
        if (std::fabs(norm(v) - 1.0) > 1e-12 || std::fabs(norm(w) - 1.0) > 1e-12)
            throw std::invalid_argument("RotationPair: v and w must be unit vectors");
        vw = inner(v, w);
        if (!(1.0 + vw > kAntipodalMargin))
            throw std::invalid_argument("RotationPair: v and w are (numerically) antipodal");
    }
};

/// R_{v,w}(x) = x + ((2<v,w>+1)<x,v> - <x,w>)/(1+<v,w>) w - <x,v+w>/(1+<v,w>) v
inline SparseVec rotate(const RotationPair& pair, const SparseVec& x) {
    const double xv = inner(x, pair.v);
    const double xw = inner(x, pair.w);
    const double denom = 1.0 + pair.vw;
    const double cw = ((2.0 * pair.vw + 1.0) * xv - xw) / denom;
    const double cv = -(xv + xw) / denom;
    const double cs[3] = {1.0, cw, cv};
    const SparseVec* vs[3] = {&x, &pair.w, &pair.v};
    return combine(cs, vs);
}

/// Unit tangent eta'(t)/||eta'(t)||.
inline SparseVec unit_tangent(const CurveContext& ctx, double t) {
    SparseVec d = eta_deriv(ctx, t);
    return scaled(1.0 / norm(d), d);
}

/// R_t: the rotation turning eta'(0)/||eta'(0)|| into eta'(t)/||eta'(t)||.
/// eta'(0) is a positive multiple of e_1, so the reference direction is e_1.
inline SparseVec rot_t(const CurveContext& ctx, double t, const SparseVec& x) {
    return rotate(RotationPair(unit_tangent(ctx, 0.0), unit_tangent(ctx, t)), x);
}

inline SparseVec rot_t_inv(const CurveContext& ctx, double t, const SparseVec& x) {
    return rotate(RotationPair(unit_tangent(ctx, t), unit_tangent(ctx, 0.0)), x);
}

namespace detail {

inline void require_normal_space(const CurveContext& ctx, const SparseVec& x,
                                 const char* who) {
    const double defect = std::fabs(inner(x, eta_deriv(ctx, 0.0)));
    if (defect > 1e-10 * norm(eta_deriv(ctx, 0.0)) * std::max(norm(x), 1e-300))
        throw std::invalid_argument(std::string(who) +
                                    ": vector is not orthogonal to eta'(0)");
}

}  // namespace detail

/// Vector part of Theta_n(t, x) = (t, R_t^{-1} S_n^{-1} R_{t+n}(x)).
/// Requires x orthogonal to eta'(0); the result again lies in that
/// hyperplane, and the map is an isometry.
inline SparseVec theta_map(const CurveContext& ctx, Index n, double t, const SparseVec& x) {
    detail::require_normal_space(ctx, x, "theta_map");
    SparseVec y = rot_t(ctx, t + static_cast<double>(n), x);
    y = y.shifted(-n);
    return rot_t_inv(ctx, t, y);
}

}  // namespace seqtube
