#ifndef CUBEKNOT_PARALLEL_HPP
#define CUBEKNOT_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cubeknot {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(begin, end, chunk_index) over [0, n) split into contiguous chunks,
/// one chunk per worker. Chunk boundaries depend only on (n, threads), so a
/// caller that merges per-chunk results in chunk order gets output
/// independent of scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (n == 0) return;
    std::size_t nchunks = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (nchunks <= 1) {
        fn(std::size_t{0}, n, std::size_t{0});
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    std::exception_ptr first_error;
    std::mutex error_mutex;

    std::size_t per = n / nchunks, extra = n % nchunks, begin = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        std::size_t len = per + (c < extra ? 1 : 0);
        std::size_t end = begin + len;
        pool.emplace_back([&, begin, end, c] {
            try {
                fn(begin, end, c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace cubeknot

#endif
