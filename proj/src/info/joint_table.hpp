#ifndef GENBOUND_INFO_JOINT_TABLE_HPP
#define GENBOUND_INFO_JOINT_TABLE_HPP

// Exact probability mass over tuples of hashed random-variable values; the
// engine behind every entropy / MI / CMI computation. All values in nats.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/common.hpp"

namespace genbound {

// Fixed-capacity cell key; tables never carry more than four variables.
struct TupleKey {
    std::array<int64_t, 4> v{};
    uint8_t len = 0;

    void push_back(int64_t x) { v[len++] = x; }
    void clear() { len = 0; }
    int64_t operator[](size_t i) const { return v[i]; }
    bool operator==(const TupleKey& o) const {
        if (len != o.len) return false;
        for (uint8_t i = 0; i < len; ++i)
            if (v[i] != o.v[i]) return false;
        return true;
    }
};

struct TupleKeyHash {
    size_t operator()(const TupleKey& k) const;
};

// Interns composite values (hypothesis pairs, instance vectors, mask
// vectors) into dense ids, with reverse lookup for joins.
class ValueInterner {
  public:
    int64_t intern(std::span<const int64_t> composite);
    std::span<const int64_t> value(int64_t id) const;
    int64_t size() const { return static_cast<int64_t>(values_.size()); }

  private:
    struct VecHash {
        size_t operator()(const std::vector<int64_t>& k) const;
    };
    std::unordered_map<std::vector<int64_t>, int64_t, VecHash> ids_;
    std::vector<std::vector<int64_t>> values_;
    std::vector<int64_t> scratch_;
};

struct JointTable {
    std::vector<std::string> axes;
    std::unordered_map<TupleKey, double, TupleKeyHash> cells;

    int axis(const std::string& name) const;  // throws on unknown variable
    double total_mass() const;
    // masses positive and summing to 1; throws naming the broken invariant
    void validate(double tol = kMassTol) const;
    void add(const TupleKey& k, double mass);
};

struct InfoEstimate {
    double value = 0.0;    // nats
    std::string method = "exact";
    double stderr_ = 0.0;
    long samples = 0;
    std::string quantity;
    int index = -1;        // 0-based row, or -1 for joint quantities
};

double table_entropy(const JointTable& t, std::span<const int> vars);
double mutual_info(const JointTable& t, std::span<const int> x, std::span<const int> y);
double cond_mutual_info(const JointTable& t, std::span<const int> x,
                        std::span<const int> y, std::span<const int> z);

// Per-realization values of the conditioning axis: I(X;Y|Z=z) with weights
// P(Z=z). The expectation reproduces the conditional value.
struct DisintegratedCmi {
    std::vector<int64_t> z_ids;
    std::vector<double> weight;
    std::vector<double> value;
    double expectation = 0.0;
    double maximum = 0.0;
};

DisintegratedCmi disintegrate_cmi(const JointTable& t, std::span<const int> x,
                                  std::span<const int> y, int z_axis);

// Values within 1e-10 of zero from below clamp to zero.
double clamp_info(double v);

}  // namespace genbound

#endif
