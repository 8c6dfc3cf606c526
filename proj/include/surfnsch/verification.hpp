// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace surfnsch {

/// Outcome of one acceptance check.
struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;   // measured values against thresholds
    double seconds = 0.0;
};

struct AcceptanceCheck {
    int id;
    std::string name;
    std::function<CheckResult()> run;
};

/// The oracle suite, in order. Each check builds its own meshes and runs; a few
/// share one cached simulation, so running them in order is cheapest.
const std::vector<AcceptanceCheck>& acceptance_checks();

/// Runs one check, converting exceptions into a failing result.
CheckResult run_check(const AcceptanceCheck& check);

/// One line per check: "[PASS] 07 mass conservation: ...".
std::string format_result(const CheckResult& r);

/// Level-3 Taylor-Hood inf-sup constant on the unit sphere from the dense
/// generalized eigenvalue oracle; frozen regression baseline.
inline constexpr double kInfSupBaselineLevel3 = 0.948708;

} // namespace surfnsch
