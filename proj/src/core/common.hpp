#ifndef GENBOUND_CORE_COMMON_HPP
#define GENBOUND_CORE_COMMON_HPP

// Shared plumbing: error types, compensated summation, deterministic RNG
// helpers and worker partitioning.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genbound {

inline constexpr uint64_t kDefaultBudget = 100000000ULL;
inline constexpr double kMassTol = 1e-12;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotApplicableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an exact enumeration would exceed the configured budget.
struct BudgetError : std::runtime_error {
    std::string quantity;
    uint64_t required;
    uint64_t budget;
    BudgetError(const std::string& q, uint64_t req, uint64_t bud);
};

void check_budget(const char* quantity, uint64_t required, uint64_t budget);

// Multiplies factors, saturating at 2^63 instead of overflowing.
uint64_t saturating_product(std::span<const uint64_t> factors);

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void merge(const KahanSum& o) {
        add(o.sum);
        add(-o.carry);
    }
    double value() const { return sum; }
};

// Deterministic uniform helpers on top of mt19937_64. std::*_distribution is
// implementation-defined, so draws go through these instead.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    size_t index(size_t k) {
        size_t r = static_cast<size_t>(unit() * static_cast<double>(k));
        return r >= k ? k - 1 : r;
    }
    // index drawn according to a cumulative mass table
    int weighted(std::span<const double> cdf);
};

std::vector<double> cumulative(std::span<const double> mass);

// Worker count: hardware concurrency capped by GENBOUND_THREADS.
int worker_count();

// Splits [0,total) into contiguous chunks, one per worker; fn(chunk, begin,
// end) runs on its own thread. Callers merge per-chunk results in chunk
// order so that totals do not depend on the worker count.
void parallel_chunks(int64_t total,
                     const std::function<void(int, int64_t, int64_t)>& fn);

// 12-significant-digit rendering used by the CSV reports.
std::string fmt_g12(double v);

}  // namespace genbound

#endif
