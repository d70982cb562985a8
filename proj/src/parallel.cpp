#include "screenbem/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace screenbem {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads) {
    if (n == 0) return;
    std::size_t nw = threads > 0 ? static_cast<std::size_t>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
    nw = std::min(nw, n);
    if (nw == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nw);
    const std::size_t chunk = (n + nw - 1) / nw;
    for (std::size_t w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace screenbem
