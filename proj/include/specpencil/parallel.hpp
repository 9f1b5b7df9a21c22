// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace specpencil {

/// Thread cap: SPECPENCIL_THREADS if set (clamped to >= 1), otherwise the
/// hardware concurrency.
int thread_cap();

/// Runs fn(i) for i in [0, n). With max_threads <= 0 the cap from
/// thread_cap() applies. Work items must write only to their own
/// pre-indexed slots so results do not depend on scheduling; fn must not
/// throw (catch into the slot instead).
void parallel_for(int n, const std::function<void(int)>& fn,
                  int max_threads = 0);

}  // namespace specpencil
