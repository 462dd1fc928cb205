#pragma once

#include <string>

namespace hilfer {

// Fast end-to-end sweep of the library's analytic invariants at reduced
// size: special-function spot values, the power rule, the eigenrelation,
// kernel moment identities, classical reductions, the steering identity,
// the duality pairing, and the windowed Gram floor. Seconds, not minutes;
// the full-size versions live in the test suite.
struct SelfTestResult {
    int checks = 0;
    int failures = 0;
    std::string log;  // one line per check
};

SelfTestResult run_selftest();

} // namespace hilfer
