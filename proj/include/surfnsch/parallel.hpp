// Copyright 2026 The surfnsch Authors. SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace surfnsch {

/// Worker count used by element loops. 1 (the default) runs serially.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Each index is visited once; the body must
/// only write to storage owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace surfnsch
