#include "orderforge/parallel.hpp"

#include <atomic>

namespace orderforge {

namespace {

std::atomic<unsigned> g_workers{0};

}  // namespace

void set_worker_count(unsigned n) { g_workers.store(n, std::memory_order_relaxed); }

unsigned worker_count() {
    const unsigned configured = g_workers.load(std::memory_order_relaxed);
    if (configured) return configured;
    static const unsigned hw = [] {
        const unsigned h = std::thread::hardware_concurrency();
        return h ? h : 1u;
    }();
    return hw;
}

}  // namespace orderforge
