#pragma once

#include <cstddef>
#include <functional>

namespace mhd {

/// Number of worker threads for internal loops. Honors MHD_CERTIFY_THREADS,
/// otherwise hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; the
/// body must only write to index-private state so results do not depend on
/// the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mhd
