#pragma once

// The identity/property suite behind `ymland verify` and the acceptance
// test binary: each check pins its tolerance in code and reports the
// measured value.

#include "ymland/quadrature.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ymland {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;      // the quantity compared against the threshold
    double threshold = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    QuadratureSpec quad;        // base spec for quadrature-backed checks
    std::uint64_t seed = 0x5eedULL;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    double total_seconds = 0.0;
    bool all_pass = false;
};

VerifyReport run_verify(const VerifyOptions& opts);

std::string verify_report_to_json(const VerifyReport& rep);

}  // namespace ymland
