#pragma once

#include <cstddef>
#include <functional>

namespace dynsamp {

// Worker count: `requested` if nonzero, else hardware concurrency, capped by
// the DYNSAMP_THREADS environment variable when it is set to a positive int.
std::size_t resolve_threads(std::size_t requested = 0);

// Calls body(i) for i in [0, count). Each index is visited exactly once;
// callers write results into slot i so output order never depends on
// scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

} // namespace dynsamp
