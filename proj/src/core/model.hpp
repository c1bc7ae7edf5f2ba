#ifndef GENBOUND_CORE_MODEL_HPP
#define GENBOUND_CORE_MODEL_HPP

// Problem model: finite data distributions, samples, the supersample /
// neighboring-hypothesis construction and the learning-algorithm interface.
// Instances are referenced by their index into the distribution support, so
// exact enumeration and hashing work on small integers.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/common.hpp"

namespace genbound {

struct Instance {
    std::vector<double> x;  // feature payload
    double y = 0.0;         // label, when the problem has one
};

bool operator==(const Instance& a, const Instance& b);

struct DiscreteDistribution {
    std::vector<Instance> support;
    std::vector<double> mass;

    int size() const { return static_cast<int>(support.size()); }
    // masses nonnegative and summing to 1 within 1e-12, support distinct
    void validate() const;
};

// A sample is an ordered list of support indices.
using Sample = std::vector<int>;

struct Supersample {
    std::vector<std::array<int, 2>> rows;  // (plus, minus) per row
    int n() const { return static_cast<int>(rows.size()); }
};

struct Mask {
    std::vector<uint8_t> bits;  // 0 = keep plus column, 1 = take minus
};

// Replaces position i (0-based) of the plus column with z_minus_i.
Sample neighbor_sample(const Sample& z_plus, int z_minus_i, int i);

// Evaluation set: item i is row i's entry selected by the mask bit.
Sample apply_mask(const Supersample& ss, const Mask& mask);

struct Hypothesis {
    std::vector<double> w;      // parameters as the loss sees them
    std::vector<int64_t> key;   // canonical encoding; equal keys <=> equal
};

class HypothesisRegistry {
  public:
    int intern(Hypothesis&& h);
    const Hypothesis& at(int id) const { return hyps_[static_cast<size_t>(id)]; }
    int size() const { return static_cast<int>(hyps_.size()); }

  private:
    struct KeyHash {
        size_t operator()(const std::vector<int64_t>& k) const;
    };
    std::unordered_map<std::vector<int64_t>, int, KeyHash> ids_;
    std::vector<Hypothesis> hyps_;
};

struct LossFunction {
    std::function<double(const Hypothesis&, const Instance&)> eval;
    std::optional<std::pair<double, double>> declared_range;
    std::string name;
};

struct LearningAlgorithm {
    // (distribution, sample of support indices, seed index) -> hypothesis
    std::function<Hypothesis(const DiscreteDistribution&, std::span<const int>, int)> train;
    std::vector<double> seed_mass = {1.0};  // finite randomness; singleton when deterministic
    bool symmetric = false;                 // invariant under sample permutation
    std::string name;

    int seeds() const { return static_cast<int>(seed_mass.size()); }
    bool deterministic() const { return seed_mass.size() == 1; }
};

struct Problem {
    std::string name;
    DiscreteDistribution dist;
    LearningAlgorithm alg;
    LossFunction loss;
    // label prediction for classification losses; empty when f-CMI is undefined
    std::function<int(const Hypothesis&, const Instance&)> predict;
    // known analytic risk minimizer, added to the Bernstein candidate set
    std::optional<Hypothesis> analytic_minimizer;

    double loss_at(const Hypothesis& h, int instance_id) const {
        return loss.eval(h, dist.support[static_cast<size_t>(instance_id)]);
    }
};

// ---------------------------------------------------------------------------
// Exact enumeration primitives

uint64_t tuple_count(const DiscreteDistribution& dist, int count);

// Visits every length-`count` tuple of support indices exactly once with its
// product mass. Throws BudgetError before starting if the space is too big.
void enumerate_tuples(const DiscreteDistribution& dist, int count, uint64_t budget,
                      const char* what,
                      const std::function<void(std::span<const int>, double)>& fn);

std::vector<std::pair<Sample, double>> enumerate_outcomes(
    const DiscreteDistribution& dist, int count, uint64_t budget);

uint64_t multiset_count(int support, int count);

// Visits every multiset of `count` draws as a per-support count vector with
// its multinomial mass. Valid as a sample enumeration only for symmetric
// algorithms.
void enumerate_multisets(const DiscreteDistribution& dist, int count, uint64_t budget,
                         const char* what,
                         const std::function<void(std::span<const int>, double)>& fn);

// ---------------------------------------------------------------------------
// Training with memoization

class Trainer {
  public:
    Trainer(const Problem& p, HypothesisRegistry& reg) : p_(&p), reg_(&reg) {}

    // Interned hypothesis id for A(sample, seed). Symmetric algorithms are
    // cached on the sorted sample.
    int train_id(std::span<const int> sample, int seed_ix);
    const Hypothesis& hyp(int id) const { return reg_->at(id); }
    HypothesisRegistry& registry() { return *reg_; }
    const Problem& problem() const { return *p_; }

  private:
    struct KeyHash {
        size_t operator()(const std::vector<int32_t>& k) const;
    };
    const Problem* p_;
    HypothesisRegistry* reg_;
    std::unordered_map<std::vector<int32_t>, int, KeyHash> cache_;
    std::vector<int32_t> scratch_;
};

// Row-shared hypothesis matrix: every row pairs the full-sample hypothesis
// with the hypothesis trained after replacing instance i.
struct NeighborhoodMatrix {
    int w_plus = -1;             // hypothesis id shared by all rows
    std::vector<int> w_minus;    // per-row replacement hypothesis id
    std::pair<int, int> row(int i) const { return {w_plus, w_minus[static_cast<size_t>(i)]}; }
    int n() const { return static_cast<int>(w_minus.size()); }
};

NeighborhoodMatrix build_hypothesis_matrix(Trainer& trainer, const Supersample& ss,
                                           int seed_ix);

}  // namespace genbound

#endif
