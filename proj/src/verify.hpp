#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpp {

struct VerifyOptions {
    std::uint64_t seed = 1;
    long systems = 100;      // enumerated systems per entropy check
    long tuples = 10000;     // random (config, e, z, s, t) tuples
    long quadrature = 500;   // random step-function pairs per case
    std::string only;        // substring filter on check names
    std::string inject_failure;  // test hook: flips the named check
    int workers = 1;
};

struct CheckResult {
    std::string name;
    std::string system;   // descriptor of the worst or failing instance
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // min over instances of (rhs - lhs) or -|gap|
    bool exact = false;   // decided in exact rational arithmetic
    long instances = 0;
    long violations = 0;
    bool pass = true;
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    long failed = 0;
    bool empty_selection = false;
};

// suite: "lemmas" (geodesic identities + entropy inequalities) or
// "entropy" (enumeration engine checks only).
VerifyReport run_verify(const std::string& suite, const VerifyOptions& opts);

}  // namespace fpp
