#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dipole::detail {

// Runs fn(row_begin, row_end) over contiguous bands of [0, rows). Each row is
// owned by exactly one band, so per-pixel writes never race.
template <typename Fn>
void for_each_band(std::size_t rows, unsigned threads, Fn&& fn) {
    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(rows / 16, 1)));
    if (workers <= 1) {
        fn(std::size_t{0}, rows);
        return;
    }
    const std::size_t band = (rows + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t begin = 0; begin < rows; begin += band) {
        const std::size_t end = std::min(rows, begin + band);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

}  // namespace dipole::detail
