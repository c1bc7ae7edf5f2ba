#include "core/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace genbound {

bool operator==(const Instance& a, const Instance& b) {
    return a.x == b.x && a.y == b.y;
}

void DiscreteDistribution::validate() const {
    if (support.empty()) throw ConfigError("distribution support is empty");
    if (support.size() != mass.size())
        throw ConfigError("distribution support/mass size mismatch");
    KahanSum total;
    for (double m : mass) {
        if (m < 0.0) throw ConfigError("distribution mass is negative");
        total.add(m);
    }
    if (std::fabs(total.value() - 1.0) > kMassTol)
        throw ConfigError("distribution masses sum to " + fmt_g12(total.value()) +
                          ", expected 1");
    for (size_t i = 0; i < support.size(); ++i)
        for (size_t j = i + 1; j < support.size(); ++j)
            if (support[i] == support[j])
                throw ConfigError("distribution support values are not distinct");
}

Sample neighbor_sample(const Sample& z_plus, int z_minus_i, int i) {
    if (i < 0 || i >= static_cast<int>(z_plus.size()))
        throw std::out_of_range("neighbor_sample: index " + std::to_string(i) +
                                " out of range for n=" + std::to_string(z_plus.size()));
    Sample out = z_plus;
    out[static_cast<size_t>(i)] = z_minus_i;
    return out;
}

Sample apply_mask(const Supersample& ss, const Mask& mask) {
    if (mask.bits.size() != ss.rows.size())
        throw std::invalid_argument("apply_mask: mask length " +
                                    std::to_string(mask.bits.size()) +
                                    " does not match supersample rows " +
                                    std::to_string(ss.rows.size()));
    Sample out(ss.rows.size());
    for (size_t i = 0; i < ss.rows.size(); ++i)
        out[i] = ss.rows[i][mask.bits[i] ? 1 : 0];
    return out;
}

static inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

size_t HypothesisRegistry::KeyHash::operator()(const std::vector<int64_t>& k) const {
    uint64_t h = 0x243f6a8885a308d3ULL;
    for (int64_t v : k) h = mix64(h ^ static_cast<uint64_t>(v));
    return static_cast<size_t>(h);
}

int HypothesisRegistry::intern(Hypothesis&& h) {
    auto it = ids_.find(h.key);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(hyps_.size());
    ids_.emplace(h.key, id);
    hyps_.push_back(std::move(h));
    return id;
}

uint64_t tuple_count(const DiscreteDistribution& dist, int count) {
    std::vector<uint64_t> f(static_cast<size_t>(count),
                            static_cast<uint64_t>(dist.size()));
    return saturating_product(f);
}

void enumerate_tuples(const DiscreteDistribution& dist, int count, uint64_t budget,
                      const char* what,
                      const std::function<void(std::span<const int>, double)>& fn) {
    if (count < 0) throw std::invalid_argument("enumerate_tuples: negative count");
    check_budget(what, tuple_count(dist, count), budget);
    if (count == 0) {
        fn({}, 1.0);
        return;
    }
    const int d = dist.size();
    std::vector<int> ids(static_cast<size_t>(count), 0);
    std::vector<double> prefix(static_cast<size_t>(count) + 1, 1.0);
    for (int k = 0; k < count; ++k) prefix[k + 1] = prefix[k] * dist.mass[0];
    while (true) {
        fn(ids, prefix[static_cast<size_t>(count)]);
        int k = count - 1;
        while (k >= 0) {
            if (++ids[static_cast<size_t>(k)] < d) break;
            ids[static_cast<size_t>(k)] = 0;
            --k;
        }
        if (k < 0) break;
        for (int j = k; j < count; ++j)
            prefix[j + 1] = prefix[j] * dist.mass[static_cast<size_t>(ids[static_cast<size_t>(j)])];
    }
}

std::vector<std::pair<Sample, double>> enumerate_outcomes(
    const DiscreteDistribution& dist, int count, uint64_t budget) {
    std::vector<std::pair<Sample, double>> out;
    enumerate_tuples(dist, count, budget, "enumerate_outcomes",
                     [&](std::span<const int> ids, double m) {
                         out.emplace_back(Sample(ids.begin(), ids.end()), m);
                     });
    return out;
}

uint64_t multiset_count(int support, int count) {
    // C(count + support - 1, support - 1), saturating
    const uint64_t cap = 1ULL << 63;
    uint64_t r = 1;
    for (int k = 1; k <= count; ++k) {
        uint64_t num = static_cast<uint64_t>(support - 1 + k);
        if (r > cap / num) return cap;
        r = r * num / static_cast<uint64_t>(k);
    }
    return r;
}

namespace {

void multiset_rec(const DiscreteDistribution& dist, int coord, int remaining,
                  double mass, std::vector<int>& counts,
                  const std::function<void(std::span<const int>, double)>& fn) {
    const int d = dist.size();
    if (coord == d - 1) {
        counts[static_cast<size_t>(coord)] = remaining;
        double m = mass * std::pow(dist.mass[static_cast<size_t>(coord)], remaining);
        fn(counts, m);
        counts[static_cast<size_t>(coord)] = 0;
        return;
    }
    double m = mass;
    for (int c = 0; c <= remaining; ++c) {
        counts[static_cast<size_t>(coord)] = c;
        // multinomial factor: divide c! back out of the running count coefficient
        multiset_rec(dist, coord + 1, remaining - c, m, counts, fn);
        m *= dist.mass[static_cast<size_t>(coord)] * (remaining - c) / (c + 1.0);
    }
    counts[static_cast<size_t>(coord)] = 0;
}

}  // namespace

void enumerate_multisets(const DiscreteDistribution& dist, int count, uint64_t budget,
                         const char* what,
                         const std::function<void(std::span<const int>, double)>& fn) {
    if (count < 0) throw std::invalid_argument("enumerate_multisets: negative count");
    check_budget(what, multiset_count(dist.size(), count), budget);
    std::vector<int> counts(static_cast<size_t>(dist.size()), 0);
    if (count == 0) {
        fn(counts, 1.0);
        return;
    }
    multiset_rec(dist, 0, count, 1.0, counts, fn);
}

size_t Trainer::KeyHash::operator()(const std::vector<int32_t>& k) const {
    uint64_t h = 0x452821e638d01377ULL;
    for (int32_t v : k) h = mix64(h ^ static_cast<uint32_t>(v));
    return static_cast<size_t>(h);
}

int Trainer::train_id(std::span<const int> sample, int seed_ix) {
    scratch_.clear();
    scratch_.push_back(seed_ix);
    for (int id : sample) scratch_.push_back(id);
    if (p_->alg.symmetric) std::sort(scratch_.begin() + 1, scratch_.end());
    auto it = cache_.find(scratch_);
    if (it != cache_.end()) return it->second;
    Hypothesis h = p_->alg.train(p_->dist, sample, seed_ix);
    int id = reg_->intern(std::move(h));
    cache_.emplace(scratch_, id);
    return id;
}

NeighborhoodMatrix build_hypothesis_matrix(Trainer& trainer, const Supersample& ss,
                                           int seed_ix) {
    const int n = ss.n();
    Sample plus(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) plus[static_cast<size_t>(i)] = ss.rows[static_cast<size_t>(i)][0];
    NeighborhoodMatrix m;
    m.w_plus = trainer.train_id(plus, seed_ix);
    m.w_minus.resize(static_cast<size_t>(n));
    Sample scratch = plus;
    for (int i = 0; i < n; ++i) {
        scratch[static_cast<size_t>(i)] = ss.rows[static_cast<size_t>(i)][1];
        m.w_minus[static_cast<size_t>(i)] = trainer.train_id(scratch, seed_ix);
        scratch[static_cast<size_t>(i)] = plus[static_cast<size_t>(i)];
    }
    return m;
}

}  // namespace genbound
