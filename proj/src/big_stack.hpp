#pragma once

#include <functional>

namespace fgo::detail {

/// Runs `f` to completion on a thread with a large stack. Exceptions
/// thrown by `f` are rethrown in the caller.
void run_with_big_stack(const std::function<void()>& f);

}  // namespace fgo::detail
