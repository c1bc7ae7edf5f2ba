#include "core/common.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace genbound {

BudgetError::BudgetError(const std::string& q, uint64_t req, uint64_t bud)
    : std::runtime_error("enumeration budget exceeded for '" + q + "': needs " +
                         std::to_string(req) + " weighted outcomes, budget is " +
                         std::to_string(bud)),
      quantity(q),
      required(req),
      budget(bud) {}

void check_budget(const char* quantity, uint64_t required, uint64_t budget) {
    if (required > budget) throw BudgetError(quantity, required, budget);
}

uint64_t saturating_product(std::span<const uint64_t> factors) {
    const uint64_t cap = 1ULL << 63;
    uint64_t p = 1;
    for (uint64_t f : factors) {
        if (f == 0) return 0;
        if (p > cap / f) return cap;
        p *= f;
    }
    return p;
}

int Rng::weighted(std::span<const double> cdf) {
    double u = unit();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return static_cast<int>(cdf.size()) - 1;
    return static_cast<int>(it - cdf.begin());
}

std::vector<double> cumulative(std::span<const double> mass) {
    std::vector<double> cdf(mass.size());
    double acc = 0.0;
    for (size_t i = 0; i < mass.size(); ++i) {
        acc += mass[i];
        cdf[i] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("GENBOUND_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

void parallel_chunks(int64_t total,
                     const std::function<void(int, int64_t, int64_t)>& fn) {
    if (total <= 0) return;
    int workers = worker_count();
    if (workers > total) workers = static_cast<int>(total);
    if (workers <= 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int64_t per = total / workers;
    int64_t extra = total % workers;
    int64_t begin = 0;
    for (int c = 0; c < workers; ++c) {
        int64_t len = per + (c < extra ? 1 : 0);
        int64_t end = begin + len;
        pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

std::string fmt_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace genbound
