#include "svarpg/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <thread>
#include <vector>

namespace svarpg {

std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SVARPG_THREADS")) {
        std::size_t cap = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
        if (ec == std::errc() && cap > 0) n = std::min(n, cap);
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);
}

}  // namespace svarpg
