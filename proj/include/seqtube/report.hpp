/// Pass/fail reporting for the verification suites.
#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace seqtube {

struct Check {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    double bound = 0.0;
};

struct VerificationReport {
    std::string suite;
    unsigned seed = 0;
    std::vector<Check> checks;

    /// Records residual <= bound as a pass.
    void require(const std::string& name, double residual, double bound) {
        checks.push_back({name, residual <= bound, residual, bound});
    }

    void require_true(const std::string& name, bool pass) {
        checks.push_back({name, pass, pass ? 0.0 : 1.0, 0.0});
    }

    void merge(const VerificationReport& other) {
        for (const Check& c : other.checks) checks.push_back(c);
    }

    bool all_pass() const {
        for (const Check& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void print(std::ostream& os) const {
        char buf[256];
        for (const Check& c : checks) {
            std::snprintf(buf, sizeof buf, "[%s] %-58s residual=%.17g bound=%.17g\n",
                          c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual, c.bound);
            os << buf;
        }
    }
};

}  // namespace seqtube
