#include "lutforge/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lutforge {

namespace {
int g_threads = -1; // -1 = uninitialized

int resolve_default() {
    if (const char* env = std::getenv("LUTFORGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}
} // namespace

void set_thread_count(int n) { g_threads = n <= 0 ? -1 : n; }

int thread_count() { return g_threads > 0 ? g_threads : resolve_default(); }

void parallel_rows(int rows, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), rows);
    if (workers <= 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int r = next.fetch_add(1);
                if (r >= rows) break;
                fn(r);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace lutforge
