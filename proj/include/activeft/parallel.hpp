#pragma once

#include <cstddef>
#include <thread>
#include <vector>

// Deterministic data-parallel helper.  Work is split into fixed-size blocks
// whose boundaries depend only on the problem size, never on the thread
// count; per-block results are combined in block order by the caller.  A run
// with 4 threads therefore produces bitwise the same result as a run with 1.

namespace activeft::parallel {

// Thread count resolution order: set_num_threads() override, else the
// ACTIVEFT_THREADS environment variable, else 1.  A value of 0 means "auto"
// (hardware concurrency).
int num_threads();
void set_num_threads(int n);

inline constexpr size_t kBlockRows = 1024;

inline size_t block_count(size_t n, size_t block = kBlockRows) {
    return (n + block - 1) / block;
}

// Invokes fn(block_index, begin, end) for every block of [0, n).  Blocks are
// distributed round-robin over the worker threads.
template <class F>
void for_blocks(size_t n, F&& fn, size_t block = kBlockRows) {
    const size_t nblocks = block_count(n, block);
    if (nblocks == 0) return;
    const size_t nthreads = std::min<size_t>(size_t(num_threads()), nblocks);
    if (nthreads <= 1) {
        for (size_t b = 0; b < nblocks; ++b)
            fn(b, b * block, std::min(n, (b + 1) * block));
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) {
        workers.emplace_back([&, t] {
            for (size_t b = t; b < nblocks; b += nthreads)
                fn(b, b * block, std::min(n, (b + 1) * block));
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace activeft::parallel
