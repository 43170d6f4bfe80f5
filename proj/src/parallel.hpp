#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace omnitile::detail {

/// Runs fn(row) for every row in [0, rows). Rows are handed out dynamically,
/// so fn must only write state owned by its row.
template <class Fn>
void parallel_rows(int rows, Fn&& fn) {
    const int workers = std::min<int>(rows, static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    if (workers <= 1 || rows < 64) {
        for (int y = 0; y < rows; ++y) {
            fn(y);
        }
        return;
    }
    std::atomic<int> next{0};
    auto body = [&] {
        for (int y = next.fetch_add(1); y < rows; y = next.fetch_add(1)) {
            fn(y);
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int i = 1; i < workers; ++i) {
        pool.emplace_back(body);
    }
    body();
}

} // namespace omnitile::detail
