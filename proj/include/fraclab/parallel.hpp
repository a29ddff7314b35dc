#pragma once

#include <cstddef>
#include <functional>

namespace fraclab {

/// Number of workers used when a caller passes workers <= 0.
int default_workers();

/// Runs body(i) for i in [0, n). Work items must be independent; callers keep
/// determinism by writing member i's output into slot i and reducing in index
/// order afterwards. Exceptions are captured and the first one is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace fraclab
