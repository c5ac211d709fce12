// Shared, lazily constructed contexts for the test binaries. Construction
// (quadrature + the tube probe grid) is deterministic, so sharing one
// instance per process is safe and keeps the suites fast.
#pragma once

#include "seqtube/bump.hpp"
#include "seqtube/curve.hpp"
#include "seqtube/field.hpp"
#include "seqtube/tube.hpp"

inline const seqtube::BumpTable& test_bump_table() {
    static const seqtube::BumpTable table = seqtube::compute_constants();
    return table;
}

inline const seqtube::CurveContext& test_ctx() {
    static const seqtube::CurveContext ctx = seqtube::make_curve_context(test_bump_table());
    return ctx;
}

inline const seqtube::TubeChart& test_chart() {
    static const seqtube::TubeChart chart = seqtube::estimate_rho(test_ctx());
    return chart;
}

inline const seqtube::FieldConfig& test_field_cfg() {
    static const seqtube::FieldConfig cfg{test_chart()};
    return cfg;
}
