#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace lpbm {

// Worker threads for Monte Carlo loops: LPBM_THREADS when set, otherwise the
// hardware concurrency, always at least 1.
int worker_count();

// Runs fn(chunk_index, begin, end) over [0, item_count) split into fixed
// chunks.  The chunk decomposition is independent of the thread count, so a
// caller that keys its randomness on chunk_index (or item index) gets
// identical results on any machine.
template <typename Fn>
void parallel_chunks(long item_count, long chunk_size, Fn&& fn) {
    if (item_count <= 0) return;
    const long nchunks = (item_count + chunk_size - 1) / chunk_size;
    std::atomic<long> next{0};
    auto work = [&]() {
        for (;;) {
            long c = next.fetch_add(1);
            if (c >= nchunks) return;
            long b = c * chunk_size;
            long e = std::min(item_count, b + chunk_size);
            fn(c, b, e);
        }
    };
    int nw = static_cast<int>(
        std::min<long>(worker_count(), std::max<long>(1, nchunks)));
    if (nw <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int t = 0; t < nw; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

}  // namespace lpbm
