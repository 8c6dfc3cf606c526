// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
// Acceptance gate: every oracle check, one PASS/FAIL line each.
#include "surfnsch/verification.hpp"

#include <cstdio>

int main()
{
    int failed = 0;
    const auto& checks = surfnsch::acceptance_checks();
    for (const auto& c : checks) {
        const surfnsch::CheckResult r = surfnsch::run_check(c);
        std::printf("%s\n", surfnsch::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%zu of %zu acceptance criteria passed\n", checks.size() - failed, checks.size());
    return failed == 0 ? 0 : 1;
}
