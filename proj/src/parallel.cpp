#include "vaceuler/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace vaceuler::par {

namespace {
constexpr std::size_t kBlock = 2048;

int env_threads() {
    const char* s = std::getenv("VACEULER_THREADS");
    if (!s) return 1;
    int n = std::atoi(s);
    return n < 1 ? 1 : n;
}
int g_threads = -1;
} // namespace

int max_threads() {
    if (g_threads < 0) g_threads = env_threads();
    return g_threads;
}

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& f) {
    if (n == 0) return;
    const int nt = std::min<int>(max_threads(), int((n + kBlock - 1) / kBlock));
    if (nt <= 1) {
        f(0, n);
        return;
    }
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            std::size_t i0 = b * kBlock;
            std::size_t i1 = std::min(n, i0 + kBlock);
            f(i0, i1);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    for (int t = 0; t < nt - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& g) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(n, [&](std::size_t i0, std::size_t i1) {
        // i0 is always a block boundary
        double s = 0.0;
        for (std::size_t i = i0; i < i1; ++i) s += g(i);
        partial[i0 / kBlock] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p; // fixed order
    return total;
}

} // namespace vaceuler::par
