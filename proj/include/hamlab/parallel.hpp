#ifndef HAMLAB_PARALLEL_HPP
#define HAMLAB_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace hamlab {

inline std::size_t parallel_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Number of blocks parallel_for_blocks will use for n items; pure in n.
inline std::size_t parallel_block_count(std::size_t n) {
    std::size_t workers = parallel_workers();
    if (workers <= 1 || n < 4096) return 1;
    std::size_t chunk = (n + workers - 1) / workers;
    return (n + chunk - 1) / chunk;
}

/// Runs fn(block, begin, end) over a static block partition of [0, n).
/// The partition depends only on n and the worker count, and blocks write
/// disjoint index ranges, so results are bit-identical for any schedule.
template <typename Fn>
void parallel_for_blocks_indexed(std::size_t n, Fn&& fn) {
    std::size_t blocks = parallel_block_count(n);
    if (blocks <= 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::size_t chunk = (n + parallel_workers() - 1) / parallel_workers();
    std::vector<std::thread> pool;
    pool.reserve(blocks);
    for (std::size_t w = 0; w < blocks; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = b + chunk < n ? b + chunk : n;
        pool.emplace_back([&fn, w, b, e] { fn(w, b, e); });
    }
    for (auto& t : pool) t.join();
}

template <typename Fn>
void parallel_for_blocks(std::size_t n, Fn&& fn) {
    parallel_for_blocks_indexed(n, [&fn](std::size_t, std::size_t b, std::size_t e) { fn(b, e); });
}

} // namespace hamlab

#endif
