#include "info/joint_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace genbound {

static inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

size_t TupleKeyHash::operator()(const TupleKey& k) const {
    uint64_t h = 0x13198a2e03707344ULL ^ k.len;
    for (uint8_t i = 0; i < k.len; ++i) h = mix64(h ^ static_cast<uint64_t>(k.v[i]));
    return static_cast<size_t>(h);
}

size_t ValueInterner::VecHash::operator()(const std::vector<int64_t>& k) const {
    uint64_t h = 0xa4093822299f31d0ULL;
    for (int64_t v : k) h = mix64(h ^ static_cast<uint64_t>(v));
    return static_cast<size_t>(h);
}

int64_t ValueInterner::intern(std::span<const int64_t> composite) {
    scratch_.assign(composite.begin(), composite.end());
    auto it = ids_.find(scratch_);
    if (it != ids_.end()) return it->second;
    int64_t id = static_cast<int64_t>(values_.size());
    values_.push_back(scratch_);
    ids_.emplace(values_.back(), id);
    return id;
}

std::span<const int64_t> ValueInterner::value(int64_t id) const {
    return values_.at(static_cast<size_t>(id));
}

int JointTable::axis(const std::string& name) const {
    for (size_t i = 0; i < axes.size(); ++i)
        if (axes[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("joint table has no variable named '" + name + "'");
}

double JointTable::total_mass() const {
    KahanSum s;
    for (const auto& [k, m] : cells) s.add(m);
    return s.value();
}

void JointTable::validate(double tol) const {
    for (const auto& [k, m] : cells)
        if (!(m > 0.0))
            throw std::runtime_error("joint-table invariant 'positive-cell-mass' violated: cell mass " +
                                     fmt_g12(m));
    double total = total_mass();
    if (std::fabs(total - 1.0) > tol)
        throw std::runtime_error("joint-table invariant 'unit-total-mass' violated: masses sum to " +
                                 fmt_g12(total));
}

void JointTable::add(const TupleKey& k, double mass) {
    auto it = cells.find(k);
    if (it == cells.end())
        cells.emplace(k, mass);
    else
        it->second += mass;
}

namespace {

double entropy_of_map(const std::unordered_map<TupleKey, double, TupleKeyHash>& m) {
    KahanSum h;
    for (const auto& [k, p] : m)
        if (p > 0.0) h.add(-p * std::log(p));
    return h.value();
}

std::unordered_map<TupleKey, double, TupleKeyHash> project(
    const JointTable& t, std::span<const int> vars) {
    std::unordered_map<TupleKey, double, TupleKeyHash> out;
    out.reserve(t.cells.size() / 2 + 1);
    TupleKey key;
    for (const auto& [cell, mass] : t.cells) {
        key.clear();
        for (int v : vars) key.push_back(cell[static_cast<size_t>(v)]);
        auto it = out.find(key);
        if (it == out.end())
            out.emplace(key, mass);
        else
            it->second += mass;
    }
    return out;
}

std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

double table_entropy(const JointTable& t, std::span<const int> vars) {
    for (int v : vars)
        if (v < 0 || v >= static_cast<int>(t.axes.size()))
            throw std::invalid_argument("table_entropy: axis index out of range");
    if (vars.size() == t.axes.size()) {
        bool identity = true;
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] != static_cast<int>(i)) identity = false;
        if (identity) return entropy_of_map(t.cells);
    }
    return entropy_of_map(project(t, vars));
}

double clamp_info(double v) {
    return (v < 0.0 && v > -1e-10) ? 0.0 : v;
}

double mutual_info(const JointTable& t, std::span<const int> x, std::span<const int> y) {
    double hx = table_entropy(t, x);
    double hy = table_entropy(t, y);
    double hxy = table_entropy(t, concat(x, y));
    return clamp_info(hx + hy - hxy);
}

double cond_mutual_info(const JointTable& t, std::span<const int> x,
                        std::span<const int> y, std::span<const int> z) {
    double hxz = table_entropy(t, concat(x, z));
    double hyz = table_entropy(t, concat(y, z));
    double hz = table_entropy(t, z);
    double hxyz = table_entropy(t, concat(concat(x, y), z));
    return clamp_info(hxz + hyz - hz - hxyz);
}

DisintegratedCmi disintegrate_cmi(const JointTable& t, std::span<const int> x,
                                  std::span<const int> y, int z_axis) {
    // group cells by the conditioning value, then run a small MI per group
    std::unordered_map<int64_t, std::vector<std::pair<TupleKey, double>>> groups;
    std::vector<int> xy = concat(x, y);
    TupleKey key;
    for (const auto& [cell, mass] : t.cells) {
        key.clear();
        for (int v : xy) key.push_back(cell[static_cast<size_t>(v)]);
        groups[cell[static_cast<size_t>(z_axis)]].emplace_back(key, mass);
    }
    std::vector<int64_t> zs;
    zs.reserve(groups.size());
    for (const auto& [z, _] : groups) zs.push_back(z);
    std::sort(zs.begin(), zs.end());

    DisintegratedCmi out;
    KahanSum expectation;
    std::vector<int> xg(x.size()), yg(y.size());
    for (size_t i = 0; i < x.size(); ++i) xg[i] = static_cast<int>(i);
    for (size_t i = 0; i < y.size(); ++i) yg[i] = static_cast<int>(x.size() + i);
    for (int64_t z : zs) {
        const auto& cells = groups[z];
        KahanSum wsum;
        for (const auto& [k, m] : cells) wsum.add(m);
        double w = wsum.value();
        JointTable sub;
        sub.axes.assign(xy.size(), "");
        for (const auto& [k, m] : cells) sub.add(k, m / w);
        double v = mutual_info(sub, xg, yg);
        out.z_ids.push_back(z);
        out.weight.push_back(w);
        out.value.push_back(v);
        expectation.add(w * v);
        out.maximum = std::max(out.maximum, v);
    }
    out.expectation = clamp_info(expectation.value());
    return out;
}

}  // namespace genbound
