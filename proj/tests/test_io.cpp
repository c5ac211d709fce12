#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "seqtube/integrator.hpp"
#include "seqtube/io.hpp"

using namespace seqtube;

namespace {

Trajectory short_run() {
    IntegrateOptions opt;
    opt.max_samples = 32;
    return integrate(test_field_cfg(), SparseVec::basis(0), 0.3, opt);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Pulls the quoted state field out of a CSV row.
std::string csv_state(const std::string& row) {
    const std::size_t open = row.find('"');
    const std::size_t close = row.rfind('"');
    REQUIRE(open != std::string::npos);
    REQUIRE(close > open);
    return row.substr(open + 1, close - open - 1);
}

}  // namespace

TEST_CASE("CSV header and row count") {
    const Trajectory traj = short_run();
    std::ostringstream os;
    write_csv(os, traj);
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == traj.samples.size() + 1);
    CHECK(lines[0] == "time,norm,dist,tau,arclen,state");
}

TEST_CASE("CSV states re-parse bit exactly") {
    const Trajectory traj = short_run();
    std::ostringstream os;
    write_csv(os, traj);
    const auto lines = split_lines(os.str());
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const SparseVec back = SparseVec::parse(csv_state(lines[i + 1]));
        CHECK(norm(axpy(-1.0, traj.samples[i].state, back)) == 0.0);
        // leading numeric fields re-parse to the exact sample values
        const std::string& row = lines[i + 1];
        CHECK(std::strtod(row.c_str(), nullptr) == traj.samples[i].time);
    }
}

TEST_CASE("JSONL one object per sample with bit-exact values") {
    const Trajectory traj = short_run();
    std::ostringstream os;
    write_jsonl(os, traj);
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == traj.samples.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        const std::size_t tpos = line.find("\"time\":");
        REQUIRE(tpos != std::string::npos);
        CHECK(std::strtod(line.c_str() + tpos + 7, nullptr) == traj.samples[i].time);
        const std::size_t spos = line.find("\"state\":\"");
        REQUIRE(spos != std::string::npos);
        const std::size_t sbeg = spos + 9;
        const std::size_t send = line.find('"', sbeg);
        const SparseVec back = SparseVec::parse(line.substr(sbeg, send - sbeg));
        CHECK(norm(axpy(-1.0, traj.samples[i].state, back)) == 0.0);
    }
}

TEST_CASE("tau renders as empty (CSV) and null (JSONL) outside the tube") {
    Trajectory traj;
    TrajectorySample s;
    s.time = 0.5;
    s.state = SparseVec::basis(3);
    s.norm = 1.0;
    s.dist = 2.0;
    s.tau = std::nullopt;
    s.arclen = 0.0;
    traj.samples.push_back(s);
    std::ostringstream csv, jsonl;
    write_csv(csv, traj);
    write_jsonl(jsonl, traj);
    CHECK(split_lines(csv.str())[1].find(",,") != std::string::npos);
    CHECK(jsonl.str().find("\"tau\":null") != std::string::npos);
}
