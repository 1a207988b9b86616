#include "kfp/common.hpp"

#include <algorithm>
#include <cstdlib>

namespace kfp {

static void enumerate_rec(int dim, int axis, int remaining, bool exact, MIdx cur, std::vector<MIdx>& out) {
    if (axis == dim) {
        if (!exact || remaining == 0) out.push_back(cur);
        return;
    }
    for (int i = 0; i <= remaining; ++i) {
        cur.v[axis] = i;
        enumerate_rec(dim, axis + 1, remaining - i, exact, cur, out);
    }
    cur.v[axis] = 0;
}

std::vector<MIdx> enumerate_simplex(int dim, int total) {
    std::vector<MIdx> out;
    for (int deg = 0; deg <= total; ++deg) {
        auto lvl = enumerate_level(dim, deg);
        out.insert(out.end(), lvl.begin(), lvl.end());
    }
    return out;
}

std::vector<MIdx> enumerate_level(int dim, int total) {
    std::vector<MIdx> out;
    enumerate_rec(dim, 0, total, true, MIdx{}, out);
    return out;
}

void parallel_for(std::int64_t n, int n_threads, const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
    if (n <= 0) return;
    n_threads = std::max(1, n_threads);
    if (n_threads == 1) {
        chunk_fn(0, n);
        return;
    }
    const std::int64_t chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::thread> workers;
    for (int t = 0; t < n_threads; ++t) {
        std::int64_t lo = t * chunk;
        std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([=, &chunk_fn] { chunk_fn(lo, hi); });
    }
    for (auto& w : workers) w.join();
}

int default_threads() {
    if (const char* env = std::getenv("KFP_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace kfp
