#ifndef ORDERFORGE_PARALLEL_HPP
#define ORDERFORGE_PARALLEL_HPP

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

// Deterministic data-parallel helper: work splits into contiguous chunks,
// one per worker, and callers merge per-chunk results in chunk order, so
// output never depends on scheduling.

namespace orderforge {

// Process-wide worker cap; 0 restores the hardware default.
void set_worker_count(unsigned n);
unsigned worker_count();

// Invoke fn(chunk_index, begin, end) over disjoint ranges covering
// [0, count). Chunk 0 starts at 0 and indices increase with begin; grain
// is the minimum items per worker, so small jobs stay on this thread. The
// first exception (by chunk index) is rethrown after all workers join.
template <typename Fn>
void run_chunks(std::uint64_t count, std::uint64_t grain, Fn&& fn) {
    if (count == 0) return;
    const std::uint64_t by_grain = count / (grain ? grain : 1);
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>({worker_count(), count, by_grain ? by_grain : 1}));
    if (workers <= 1) {
        fn(0u, std::uint64_t{0}, count);
        return;
    }
    const std::uint64_t per = count / workers;
    const std::uint64_t extra = count % workers;
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t len = per + (w < extra ? 1 : 0);
        const std::uint64_t end = begin + len;
        pool.emplace_back([&fn, &errors, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace orderforge

#endif
