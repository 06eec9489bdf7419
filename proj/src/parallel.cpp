#include "iaspa/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace iaspa {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned w = workers > 0 ? static_cast<unsigned>(workers) : std::thread::hardware_concurrency();
    w = std::max(1u, std::min<unsigned>(w, static_cast<unsigned>(n)));
    if (w == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::exception_ptr first_error;
    std::mutex err_mu;
    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!first_error) first_error = std::current_exception();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(w - 1);
    const std::size_t chunk = (n + w - 1) / w;
    for (unsigned t = 1; t < w; ++t) {
        const std::size_t begin = t * chunk;
        if (begin >= n) break;
        pool.emplace_back(run_chunk, begin, std::min(n, begin + chunk));
    }
    run_chunk(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace iaspa
