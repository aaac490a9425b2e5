#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace vegidx {

/// Number of row blocks for_row_blocks will use.
inline std::size_t row_block_count(std::size_t rows, unsigned workers) {
    return std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(rows, 1));
}

/// Splits [0, rows) into row_block_count() contiguous blocks and runs
/// fn(block_index, row_begin, row_end) for each. Blocks are disjoint, so
/// any per-pixel map is independent of the worker count. The first
/// exception thrown by a block (in block order) is rethrown after all
/// blocks finish.
template <typename Fn>
void for_row_blocks(std::size_t rows, unsigned workers, Fn&& fn) {
    const std::size_t blocks = row_block_count(rows, workers);
    if (blocks == 1) {
        fn(std::size_t{0}, std::size_t{0}, rows);
        return;
    }
    const std::size_t step = rows / blocks;
    const std::size_t extra = rows % blocks;
    std::vector<std::exception_ptr> errors(blocks);
    {
        std::vector<std::jthread> threads;
        threads.reserve(blocks);
        std::size_t begin = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            const std::size_t end = begin + step + (b < extra ? 1 : 0);
            threads.emplace_back([&fn, &errors, b, begin, end] {
                try {
                    fn(b, begin, end);
                } catch (...) {
                    errors[b] = std::current_exception();
                }
            });
            begin = end;
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace vegidx
