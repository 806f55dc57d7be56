#ifndef SMARTEM_PARALLEL_H
#define SMARTEM_PARALLEL_H

#include <cstddef>
#include <functional>

namespace smartem
{

/// Worker count: SMARTEM_THREADS when set and non-zero, otherwise hardware concurrency.
std::size_t WorkerCount();

/**
 * Runs body(i) for i in [0, count) on up to `workers` threads (0 = WorkerCount()).
 * Indices are split into contiguous chunks; body must only write to its own slot.
 */
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

} // namespace smartem

#endif // SMARTEM_PARALLEL_H
