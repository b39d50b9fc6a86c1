#include "volhedge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace volhedge {

namespace {
thread_local bool g_in_worker = false;
}

int thread_count() {
    if (const char* env = std::getenv("VOLHEDGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    if (n == 0) return;
    const std::size_t workers =
        g_in_worker ? 1 : std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        chunk_fn(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, w, begin, end] {
            g_in_worker = true;
            try {
                chunk_fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
            g_in_worker = false;
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace volhedge
