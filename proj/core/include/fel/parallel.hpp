#pragma once

#include <cstddef>
#include <functional>

namespace fel {

/// Worker count used by the parallel loops below (default 1).
void set_num_threads(int n);
int num_threads();

/// Calls body(i) for i in [0, count). Callers write results per index, so the
/// outcome does not depend on the thread count. If bodies throw, the exception
/// of the lowest failing index is rethrown. Nested calls run inline.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fel
