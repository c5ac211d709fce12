// Command-line front end: construction constants, pointwise queries,
// trajectory tracing/export, and the randomized verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 construction failure,
// 3 usage error. All numeric output uses 17 significant digits.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqtube/bump.hpp"
#include "seqtube/curve.hpp"
#include "seqtube/field.hpp"
#include "seqtube/integrator.hpp"
#include "seqtube/io.hpp"
#include "seqtube/seqvec.hpp"
#include "seqtube/tube.hpp"
#include "seqtube/verify.hpp"

namespace {

using namespace seqtube;

std::string f17(double x) { return detail::fmt17(x); }

struct RunConfig {
    double quad_tol = 1e-12;
    double rho_safety = 1.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    unsigned seed = 1;
};

// Contexts are built lazily, once per process: the tube probe grid behind
// estimate_rho is the expensive part and only some subcommands need it.
struct Lazy {
    RunConfig cfg;
    std::optional<CurveContext> ctx_;
    std::optional<FieldConfig> field_;

    const CurveContext& ctx() {
        if (!ctx_) ctx_ = make_curve_context(compute_constants(cfg.quad_tol));
        return *ctx_;
    }

    const FieldConfig& field() {
        if (!field_) field_ = FieldConfig(estimate_rho(ctx(), cfg.rho_safety));
        return *field_;
    }
};

int cmd_constants(Lazy& lazy) {
    const CurveContext& ctx = lazy.ctx();
    const FieldConfig& fc = lazy.field();
    const BumpTable& b = ctx.bump;
    std::cout << "A=" << f17(b.A) << "\nB=" << f17(b.B) << "\nC=" << f17(b.C) << "\n"
              << "A<0=" << (b.A < 0 ? "true" : "false") << "\n"
              << "B>0=" << (b.B > 0 ? "true" : "false") << "\n"
              << "C<0=" << (b.C < 0 ? "true" : "false") << "\n"
              << "panel_integral[-2,-3/2]=" << f17(b.panel_integrals[0]) << "\n"
              << "panel_integral[-3/2,-1]=" << f17(b.panel_integrals[1]) << "\n"
              << "panel_integral[-1,0]=" << f17(b.panel_integrals[2]) << "\n"
              << "panel_integral[0,1]=" << f17(b.panel_integrals[3]) << "\n"
              << "quad_tol=" << f17(b.quad_tol) << "\n"
              << "rho0=" << f17(ctx.rho0) << "\n"
              << "rho=" << f17(fc.chart.rho) << "\n"
              << "rho<rho0/2=" << (fc.chart.rho < ctx.rho0 / 2.0 ? "true" : "false") << "\n"
              << "L1=" << f17(ctx.L1) << "\n"
              << "sup_norm=" << f17(ctx.sup_norm) << "\n"
              << "min_norm=" << f17(ctx.min_norm) << "\n"
              << "probe_candidate=" << f17(fc.chart.probe_report.initial_candidate) << "\n"
              << "probe_halvings=" << fc.chart.probe_report.halvings << "\n"
              << "probe_count=" << fc.chart.probe_report.probes << "\n"
              << "probe_failures=" << fc.chart.probe_report.failures << "\n"
              << "probe_seed=" << fc.chart.probe_report.settings.seed << "\n";
    return 0;
}

int cmd_eval_h(Lazy& lazy, double at, int order) {
    std::cout << f17(h_eval(lazy.ctx().bump, at, order)) << "\n";
    return 0;
}

int cmd_curve(Lazy& lazy, double at, bool reparam) {
    const CurveContext& ctx = lazy.ctx();
    const SparseVec value = reparam ? gamma(ctx, at) : eta(ctx, at);
    const SparseVec deriv = reparam ? gamma_deriv(ctx, at) : eta_deriv(ctx, at);
    std::cout << "value=" << value.encode() << "\nderiv=" << deriv.encode() << "\n";
    return 0;
}

int cmd_rho(Lazy& lazy) {
    const FieldConfig& fc = lazy.field();
    const ProbeReport& pr = fc.chart.probe_report;
    std::cout << "rho0=" << f17(lazy.ctx().rho0) << "\nrho=" << f17(fc.chart.rho) << "\n"
              << "candidate=" << f17(pr.initial_candidate) << "\n"
              << "halvings=" << pr.halvings << "\nprobes=" << pr.probes << "\n"
              << "failures=" << pr.failures << "\nseed=" << pr.settings.seed << "\n";
    return 0;
}

int cmd_project(Lazy& lazy, const std::string& enc) {
    const SparseVec p = SparseVec::parse(enc);
    const NormalPoint np = phi_inv(lazy.field().chart, p);
    std::cout << "s=" << f17(np.t) << "\ntau=" << f17(phi_inv(np.t)) << "\n"
              << "dist=" << f17(norm(np.x)) << "\noffset=" << np.x.encode() << "\n";
    return 0;
}

int cmd_field(Lazy& lazy, const std::string& enc) {
    const SparseVec p = SparseVec::parse(enc);
    const FieldConfig& fc = lazy.field();
    const FieldEval fe = field_eval_full(fc, p);
    std::cout << "dist=" << f17(fe.dist) << "\ntau=";
    if (fe.tau)
        std::cout << f17(*fe.tau);
    else
        std::cout << "none";
    std::cout << "\ntheta=" << f17(cutoff(fc, fe.dist * fe.dist)) << "\nf="
              << fe.f.encode() << "\n";
    return 0;
}

int cmd_trace(Lazy& lazy, double t_end, const std::string& x0_enc, const std::string& out,
              const std::string& format) {
    const FieldConfig& fc = lazy.field();
    const SparseVec x0 = x0_enc.empty() ? SparseVec::basis(0) : SparseVec::parse(x0_enc);
    IntegrateOptions opt;
    opt.rtol = lazy.cfg.rtol;
    opt.atol = lazy.cfg.atol;
    const Trajectory traj = integrate(fc, x0, t_end, opt);
    std::ofstream os(out);
    if (!os) {
        std::cerr << "trace: cannot open output file " << out << "\n";
        return 3;
    }
    if (format == "csv")
        write_csv(os, traj);
    else
        write_jsonl(os, traj);
    std::cout << "status=" << to_string(traj.status) << "\n"
              << "final_time=" << f17(traj.final_time) << "\n"
              << "samples=" << traj.samples.size() << "\n"
              << "steps_accepted=" << traj.steps_accepted << "\n"
              << "steps_rejected=" << traj.steps_rejected << "\n"
              << "max_norm=" << f17(traj.max_norm) << "\n"
              << "max_dominant_index=" << traj.max_dominant_index << "\n";
    return 0;
}

int cmd_verify(Lazy& lazy, const std::string& suite) {
    VerificationReport rep;
    if (suite == "bump")
        rep = verify_bump(lazy.ctx().bump, lazy.cfg.seed);
    else if (suite == "curve")
        rep = verify_curve(lazy.ctx(), lazy.cfg.seed);
    else if (suite == "rotation")
        rep = verify_rotation(lazy.ctx(), lazy.cfg.seed);
    else if (suite == "tube")
        rep = verify_tube(lazy.field().chart, lazy.cfg.seed);
    else if (suite == "field")
        rep = verify_field(lazy.field(), lazy.cfg.seed);
    else if (suite == "ode")
        rep = verify_ode(lazy.field(), lazy.cfg.seed);
    else
        rep = verify_all(lazy.field(), lazy.cfg.seed);
    std::cout << "suite=" << suite << " seed=" << lazy.cfg.seed << "\n";
    rep.print(std::cout);
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded maximal ODE solution on l2(Z): construction and diagnostics"};
    app.require_subcommand(1);

    Lazy lazy;
    app.add_option("--quad-tol", lazy.cfg.quad_tol, "quadrature tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--safety", lazy.cfg.rho_safety, "tube radius safety factor in ]0,1]");
    app.add_option("--seed", lazy.cfg.seed, "seed for randomized suites");

    auto* c_const = app.add_subcommand("constants", "print construction constants");

    auto* c_evalh = app.add_subcommand("eval-h", "evaluate the bump h or a derivative");
    double at = 0.0;
    int order = 0;
    c_evalh->add_option("--at", at, "evaluation point")->required();
    c_evalh->add_option("--order", order, "0: h, 1: h', 2: h''")->check(CLI::Range(0, 2));

    auto* c_curve = app.add_subcommand("curve", "evaluate eta (or gamma) and its derivative");
    double curve_at = 0.0;
    bool reparam = false;
    c_curve->add_option("--at", curve_at, "parameter value")->required();
    c_curve->add_flag("--reparam", reparam, "evaluate gamma = eta o phi instead of eta");

    auto* c_rho = app.add_subcommand("rho", "validate a tube radius and print probe stats");

    auto* c_project = app.add_subcommand("project", "invert the tube chart at a point");
    std::string proj_point;
    c_project->add_option("--point", proj_point, "sparse encoding index:value;...")->required();

    auto* c_field = app.add_subcommand("field", "evaluate the vector field at a point");
    std::string field_point;
    c_field->add_option("--point", field_point, "sparse encoding index:value;...")->required();

    auto* c_trace = app.add_subcommand("trace", "integrate x' = f(x) and export the trajectory");
    double t_end = 0.9;
    std::string x0_enc, out_file, format = "csv";
    c_trace->add_option("--t-end", t_end, "integration end time")->required();
    c_trace->add_option("--rtol", lazy.cfg.rtol, "relative tolerance");
    c_trace->add_option("--atol", lazy.cfg.atol, "absolute tolerance");
    c_trace->add_option("--x0", x0_enc, "initial state (default: e_0 = gamma(0))");
    c_trace->add_option("--out", out_file, "output file")->required();
    c_trace->add_option("--format", format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));

    auto* c_verify = app.add_subcommand("verify", "run a randomized invariant suite");
    std::string suite;
    c_verify->add_option("--suite", suite, "bump|curve|rotation|tube|field|ode|all")
        ->required()
        ->check(CLI::IsMember({"bump", "curve", "rotation", "tube", "field", "ode", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        if (*c_const) return cmd_constants(lazy);
        if (*c_evalh) return cmd_eval_h(lazy, at, order);
        if (*c_curve) return cmd_curve(lazy, curve_at, reparam);
        if (*c_rho) return cmd_rho(lazy);
        if (*c_project) return cmd_project(lazy, proj_point);
        if (*c_field) return cmd_field(lazy, field_point);
        if (*c_trace) return cmd_trace(lazy, t_end, x0_enc, out_file, format);
        if (*c_verify) return cmd_verify(lazy, suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const TubeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind == TubeError::Kind::no_valid_radius ? 2 : 1;
    } catch (const QuadratureError& e) {
        std::cerr << "construction error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 3;
}
