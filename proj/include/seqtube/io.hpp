/// Trajectory export: CSV and JSONL, one record per retained sample.
/// Columns/keys: time, norm, dist, tau, arclen, state (sparse encoding).
/// All numbers are printed with 17 significant digits so that re-parsing
/// reproduces the sample values bit for bit.
#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "seqtube/integrator.hpp"

namespace seqtube {

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "time,norm,dist,tau,arclen,state\n";
    for (const TrajectorySample& s : traj.samples) {
        os << detail::fmt17(s.time) << ',' << detail::fmt17(s.norm) << ','
           << detail::fmt17(s.dist) << ',';
        if (s.tau) os << detail::fmt17(*s.tau);
        os << ',' << detail::fmt17(s.arclen) << ",\"" << s.state.encode() << "\"\n";
    }
}

inline void write_jsonl(std::ostream& os, const Trajectory& traj) {
    for (const TrajectorySample& s : traj.samples) {
        os << "{\"time\":" << detail::fmt17(s.time) << ",\"norm\":" << detail::fmt17(s.norm)
           << ",\"dist\":" << detail::fmt17(s.dist) << ",\"tau\":";
        if (s.tau)
            os << detail::fmt17(*s.tau);
        else
            os << "null";
        os << ",\"arclen\":" << detail::fmt17(s.arclen) << ",\"state\":\""
           << s.state.encode() << "\"}\n";
    }
}

}  // namespace seqtube
