#include "penrose/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace penrose {

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    // Fixed chunk grid: 8 chunks per worker bounds the tail imbalance while
    // keeping chunk boundaries a function of n alone.
    const std::size_t chunks = std::min<std::size_t>(n, static_cast<std::size_t>(workers) * 8);
    const std::size_t step = (n + chunks - 1) / chunks;
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            const std::size_t begin = i * step;
            if (begin >= n) return;
            fn(begin, std::min(n, begin + step));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

}  // namespace penrose
