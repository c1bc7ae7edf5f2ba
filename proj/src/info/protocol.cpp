#include "info/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace genbound {

const char* var_name(Var v) {
    switch (v) {
        case Var::ZPlusI: return "Zplus_i";
        case Var::ZMinusI: return "Zminus_i";
        case Var::ZRowI: return "Zrow_i";
        case Var::UI: return "U_i";
        case Var::Seed: return "R";
        case Var::WPlus: return "Wplus";
        case Var::WMinusI: return "Wminus_i";
        case Var::WPairI: return "Wpair_i";
        case Var::ZHatI: return "Zhat_i";
        case Var::WSelPairI: return "Wselpair_i";
        case Var::DeltaLI: return "dL_i";
        case Var::LossPairI: return "Lpair_i";
        case Var::PredPairI: return "Fpair_i";
        case Var::WStd: return "Wstd";
        case Var::ZPlusVec: return "Zplus_vec";
        case Var::UVec: return "U_vec";
        case Var::EVec: return "E_vec";
        case Var::WMat: return "Wmat";
        case Var::FVecPair: return "Fvec_pair";
    }
    return "?";
}

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::IomiIndividual: return "iomi_individual";
        case Quantity::IomiConditional: return "iomi_conditional";
        case Quantity::IomiFull: return "iomi_full";
        case Quantity::HypCmi: return "hyp_cmi";
        case Quantity::SsCmi: return "ss_cmi";
        case Quantity::StdCmi: return "std_cmi";
        case Quantity::LdMi: return "ld_mi";
        case Quantity::LdCmi: return "ld_cmi";
        case Quantity::ECmi: return "e_cmi";
        case Quantity::FCmi: return "f_cmi";
        case Quantity::VecCmi: return "vec_cmi";
    }
    return "?";
}

Quantity quantity_from_name(const std::string& name) {
    static const Quantity all[] = {
        Quantity::IomiIndividual, Quantity::IomiConditional, Quantity::IomiFull,
        Quantity::HypCmi, Quantity::SsCmi, Quantity::StdCmi, Quantity::LdMi,
        Quantity::LdCmi, Quantity::ECmi, Quantity::FCmi, Quantity::VecCmi};
    for (Quantity q : all)
        if (name == quantity_name(q)) return q;
    throw ConfigError("unknown quantity name '" + name + "'");
}

bool quantity_is_per_row(Quantity q) {
    return q != Quantity::IomiFull && q != Quantity::VecCmi;
}

namespace {

// kind tags keep distinct composite families from aliasing in the interner
enum : int64_t {
    kTagWPair = 1,
    kTagWSelPair,
    kTagLossPair,
    kTagPredPair,
    kTagZVec,
    kTagEVec,
    kTagWMat,
    kTagFVec,
};

struct Needs {
    bool zplus_all = false, zplus_i = false;
    bool zminus_all = false, zminus_i = false;
    bool u_all = false, u_i = false;
    bool seed_axis = false;
    bool train_plus = false, train_minus_i = false, train_minus_all = false;
    bool train_std = false, train_sel = false;
    bool vector_vars = false;
};

Needs analyze(std::span<const Var> vars, const Problem& p) {
    Needs nd;
    bool has_wstd = false, has_other_train = false;
    for (Var v : vars) {
        switch (v) {
            case Var::ZPlusI: nd.zplus_i = true; break;
            case Var::ZMinusI: nd.zminus_i = true; break;
            case Var::ZRowI: nd.zplus_i = nd.zminus_i = true; break;
            case Var::UI: nd.u_i = true; break;
            case Var::Seed: nd.seed_axis = true; break;
            case Var::WPlus:
                nd.zplus_all = nd.train_plus = true;
                has_other_train = true;
                break;
            case Var::WMinusI:
            case Var::WPairI:
                nd.zplus_all = nd.zminus_i = true;
                nd.train_plus = nd.train_minus_i = true;
                has_other_train = true;
                break;
            case Var::ZHatI:
                nd.zplus_i = nd.zminus_i = nd.u_i = true;
                break;
            case Var::WSelPairI:
            case Var::DeltaLI:
            case Var::LossPairI:
            case Var::PredPairI:
                nd.zplus_all = nd.zminus_i = nd.u_i = true;
                nd.train_plus = nd.train_minus_i = nd.train_sel = true;
                has_other_train = true;
                break;
            case Var::WStd:
                nd.zplus_all = nd.zminus_i = nd.u_i = true;
                nd.train_std = true;
                has_wstd = true;
                break;
            case Var::ZPlusVec:
                nd.zplus_all = nd.vector_vars = true;
                break;
            case Var::UVec:
                nd.u_all = nd.vector_vars = true;
                break;
            case Var::EVec:
                nd.zplus_all = nd.zminus_all = nd.u_all = true;
                nd.vector_vars = true;
                break;
            case Var::WMat:
                nd.zplus_all = nd.zminus_all = true;
                nd.train_plus = nd.train_minus_all = true;
                nd.vector_vars = true;
                has_other_train = true;
                break;
            case Var::FVecPair:
                nd.zplus_all = nd.zminus_all = nd.u_all = true;
                nd.train_plus = nd.train_minus_all = true;
                nd.vector_vars = true;
                has_other_train = true;
                break;
        }
        if ((v == Var::PredPairI || v == Var::FVecPair) && !p.predict)
            throw NotApplicableError(
                "f-CMI is undefined for this problem: no label-prediction map");
    }
    // WStd reinterprets the off-row plus entries as selected instances, which
    // conflicts with any variable that reads them in their supersample role.
    if (has_wstd && (has_other_train || nd.vector_vars))
        throw std::invalid_argument(
            "WStd cannot be combined with other trained or vector variables");
    return nd;
}

struct QuantitySpec {
    std::vector<Var> vars;
    std::vector<int> x, y, z;
    int dis_axis = -1;  // conditioning axis for the disintegrated variant
};

QuantitySpec spec_for(Quantity q) {
    switch (q) {
        case Quantity::IomiIndividual:
            return {{Var::WPlus, Var::ZPlusI}, {0}, {1}, {}, -1};
        case Quantity::IomiConditional:
            return {{Var::WPlus, Var::ZPlusI, Var::WMinusI}, {0}, {1}, {2}, 2};
        case Quantity::IomiFull:
            return {{Var::WPlus, Var::ZPlusVec}, {0}, {1}, {}, -1};
        case Quantity::HypCmi:
            return {{Var::ZHatI, Var::UI, Var::WPairI}, {0}, {1}, {2}, 2};
        case Quantity::SsCmi:
            return {{Var::WSelPairI, Var::UI, Var::ZPlusI}, {0}, {1}, {2}, 2};
        case Quantity::StdCmi:
            return {{Var::WStd, Var::UI, Var::ZRowI}, {0}, {1}, {2}, 2};
        case Quantity::LdMi:
            return {{Var::DeltaLI, Var::UI}, {0}, {1}, {}, -1};
        case Quantity::LdCmi:
            return {{Var::DeltaLI, Var::UI, Var::ZPlusI}, {0}, {1}, {2}, 2};
        case Quantity::ECmi:
            return {{Var::LossPairI, Var::UI, Var::ZPlusI}, {0}, {1}, {2}, 2};
        case Quantity::FCmi:
            return {{Var::PredPairI, Var::UI, Var::ZPlusI}, {0}, {1}, {2}, 2};
        case Quantity::VecCmi:
            return {{Var::EVec, Var::UVec, Var::WMat}, {0}, {1}, {2}, 2};
    }
    throw std::logic_error("unreachable");
}

inline int64_t quantize_loss(double l) { return llround(l * 1e9); }

// Evaluates the requested variables for one assignment of the primitive draws.
class Extractor {
  public:
    Extractor(ProtocolContext& ctx, int i, std::span<const Var> vars, const Needs& nd)
        : ctx_(&ctx), i_(i), vars_(vars.begin(), vars.end()), nd_(nd) {
        const int n = ctx.n();
        zplus.assign(static_cast<size_t>(n), 0);
        zminus.assign(static_cast<size_t>(n), 0);
        u.assign(static_cast<size_t>(n), 0);
        scratch_.assign(static_cast<size_t>(n), 0);
        wminus_.assign(static_cast<size_t>(n), -1);
    }

    std::vector<int> zplus, zminus;
    std::vector<uint8_t> u;
    int r = 0;

    void extract(TupleKey& out) {
        const Problem& p = ctx_->problem();
        Trainer& tr = ctx_->trainer();
        const int n = ctx_->n();
        const size_t si = static_cast<size_t>(i_);

        int wp = -1, wmi = -1, wstd = -1;
        if (nd_.train_plus) wp = tr.train_id(zplus, r);
        if (nd_.train_minus_i) {
            scratch_ = zplus;
            scratch_[si] = zminus[si];
            wmi = tr.train_id(scratch_, r);
        }
        if (nd_.train_minus_all) {
            scratch_ = zplus;
            for (int j = 0; j < n; ++j) {
                const size_t sj = static_cast<size_t>(j);
                scratch_[sj] = zminus[sj];
                wminus_[sj] = tr.train_id(scratch_, r);
                scratch_[sj] = zplus[sj];
            }
            wmi = wminus_[si];
        }
        if (nd_.train_std) {
            scratch_ = zplus;
            scratch_[si] = u[si] ? zminus[si] : zplus[si];
            wstd = tr.train_id(scratch_, r);
        }
        int wsel = -1, wbar = -1;
        if (nd_.train_sel) {
            wsel = u[si] ? wmi : wp;
            wbar = u[si] ? wp : wmi;
        }

        out.clear();
        const int64_t D = p.dist.size();
        for (Var v : vars_) {
            switch (v) {
                case Var::ZPlusI: out.push_back(zplus[si]); break;
                case Var::ZMinusI: out.push_back(zminus[si]); break;
                case Var::ZRowI: out.push_back(zplus[si] * D + zminus[si]); break;
                case Var::UI: out.push_back(u[si]); break;
                case Var::Seed: out.push_back(r); break;
                case Var::WPlus: out.push_back(wp); break;
                case Var::WMinusI: out.push_back(wmi); break;
                case Var::WPairI:
                    comp_ = {kTagWPair, wp, wmi};
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                case Var::ZHatI: out.push_back(u[si] ? zminus[si] : zplus[si]); break;
                case Var::WSelPairI:
                    comp_ = {kTagWSelPair, wsel, wbar};
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                case Var::DeltaLI: {
                    double dl = p.loss_at(tr.hyp(wsel), zplus[si]) -
                                p.loss_at(tr.hyp(wbar), zplus[si]);
                    out.push_back(quantize_loss(dl));
                    break;
                }
                case Var::LossPairI:
                    comp_ = {kTagLossPair,
                             quantize_loss(p.loss_at(tr.hyp(wsel), zplus[si])),
                             quantize_loss(p.loss_at(tr.hyp(wbar), zplus[si]))};
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                case Var::PredPairI: {
                    const Instance& z = p.dist.support[static_cast<size_t>(zplus[si])];
                    comp_ = {kTagPredPair, p.predict(tr.hyp(wsel), z),
                             p.predict(tr.hyp(wbar), z)};
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                }
                case Var::WStd: out.push_back(wstd); break;
                case Var::ZPlusVec:
                    comp_.assign(1, kTagZVec);
                    for (int z : zplus) comp_.push_back(z);
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                case Var::UVec: {
                    int64_t bits = 0;
                    for (int j = 0; j < n; ++j)
                        bits |= static_cast<int64_t>(u[static_cast<size_t>(j)]) << j;
                    out.push_back(bits);
                    break;
                }
                case Var::EVec:
                    comp_.assign(1, kTagEVec);
                    for (int j = 0; j < n; ++j) {
                        const size_t sj = static_cast<size_t>(j);
                        comp_.push_back(u[sj] ? zminus[sj] : zplus[sj]);
                    }
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                case Var::WMat:
                    comp_.assign(1, kTagWMat);
                    comp_.push_back(wp);
                    for (int j = 0; j < n; ++j) comp_.push_back(wminus_[static_cast<size_t>(j)]);
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                case Var::FVecPair: {
                    comp_.assign(1, kTagFVec);
                    for (int j = 0; j < n; ++j) {
                        const size_t sj = static_cast<size_t>(j);
                        const Instance& z = p.dist.support[static_cast<size_t>(zplus[sj])];
                        int wj = u[sj] ? wminus_[sj] : wp;
                        int wbj = u[sj] ? wp : wminus_[sj];
                        comp_.push_back(p.predict(tr.hyp(wj), z));
                        comp_.push_back(p.predict(tr.hyp(wbj), z));
                    }
                    out.push_back(ctx_->composites().intern(comp_));
                    break;
                }
            }
        }
    }

  private:
    ProtocolContext* ctx_;
    int i_;
    std::vector<Var> vars_;
    Needs nd_;
    Sample scratch_;
    std::vector<int> wminus_;
    std::vector<int64_t> comp_;
};

struct AxisRef {
    enum Kind { PlusSlot, MinusSlot, SeedAxis, BitSlot } kind;
    int slot;
    int card;
};

std::vector<AxisRef> ordered_axes(const Needs& nd, int n, int i, int d, int seeds) {
    std::vector<AxisRef> axes;
    if (nd.zplus_all) {
        for (int j = 0; j < n; ++j) axes.push_back({AxisRef::PlusSlot, j, d});
    } else if (nd.zplus_i) {
        axes.push_back({AxisRef::PlusSlot, i, d});
    }
    if (nd.train_plus || nd.train_minus_i || nd.train_minus_all || nd.train_std ||
        nd.seed_axis)
        axes.push_back({AxisRef::SeedAxis, 0, seeds});
    if (nd.zminus_all) {
        for (int j = 0; j < n; ++j) axes.push_back({AxisRef::MinusSlot, j, d});
    } else if (nd.zminus_i) {
        axes.push_back({AxisRef::MinusSlot, i, d});
    }
    if (nd.u_all) {
        for (int j = 0; j < n; ++j) axes.push_back({AxisRef::BitSlot, j, 2});
    } else if (nd.u_i) {
        axes.push_back({AxisRef::BitSlot, i, 2});
    }
    return axes;
}

// Runs fn(mass) for every assignment of the listed axes into the extractor
// buffers; mass multiplies the per-axis weights onto base_mass.
void odometer(const DiscreteDistribution& dist, std::span<const double> seed_mass,
              std::span<const AxisRef> axes, Extractor& ex, double base_mass,
              const std::function<void(double)>& fn) {
    const size_t k = axes.size();
    std::vector<int> idx(k, 0);
    std::vector<double> mass(k + 1);
    mass[0] = base_mass;

    auto axis_weight = [&](size_t a) {
        const AxisRef& ax = axes[a];
        switch (ax.kind) {
            case AxisRef::PlusSlot:
            case AxisRef::MinusSlot:
                return dist.mass[static_cast<size_t>(idx[a])];
            case AxisRef::SeedAxis:
                return seed_mass[static_cast<size_t>(idx[a])];
            case AxisRef::BitSlot:
                return 0.5;
        }
        return 1.0;
    };
    auto apply = [&](size_t a) {
        const AxisRef& ax = axes[a];
        switch (ax.kind) {
            case AxisRef::PlusSlot: ex.zplus[static_cast<size_t>(ax.slot)] = idx[a]; break;
            case AxisRef::MinusSlot: ex.zminus[static_cast<size_t>(ax.slot)] = idx[a]; break;
            case AxisRef::SeedAxis: ex.r = idx[a]; break;
            case AxisRef::BitSlot: ex.u[static_cast<size_t>(ax.slot)] = static_cast<uint8_t>(idx[a]); break;
        }
    };

    for (size_t a = 0; a < k; ++a) {
        apply(a);
        mass[a + 1] = mass[a] * axis_weight(a);
    }
    while (true) {
        fn(mass[k]);
        size_t a = k;
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].card) break;
            idx[a] = 0;
            if (a == 0) return;
        }
        if (k == 0) return;
        for (size_t b = a; b < k; ++b) {
            apply(b);
            mass[b + 1] = mass[b] * axis_weight(b);
        }
    }
}

}  // namespace

ProtocolContext::ProtocolContext(const Problem& p, int n, uint64_t budget)
    : p_(&p), n_(n), budget_(budget), trainer_(p, reg_) {
    if (n < 1) throw std::invalid_argument("ProtocolContext: n must be >= 1");
    p.dist.validate();
}

JointTable ProtocolContext::build(int i, std::span<const Var> vars, const char* what) {
    if (i < 0 || i >= n_) throw std::out_of_range("protocol row index out of range");
    if (vars.empty() || vars.size() > 4)
        throw std::invalid_argument("protocol tables carry between 1 and 4 variables");
    Needs nd = analyze(vars, *p_);
    Extractor ex(*this, i, vars, nd);

    JointTable table;
    for (Var v : vars) table.axes.emplace_back(var_name(v));

    const int d = p_->dist.size();
    const int seeds = p_->alg.seeds();
    const bool row_reduced = p_->alg.symmetric && nd.zplus_all && !nd.vector_vars;

    TupleKey key;
    if (row_reduced) {
        // unmarked rows enter only through their multiset
        Needs inner = nd;
        inner.zplus_all = false;
        inner.zplus_i = true;
        auto axes = ordered_axes(inner, n_, i, d, seeds);
        std::vector<uint64_t> f{multiset_count(d, n_ - 1)};
        for (const auto& ax : axes) f.push_back(static_cast<uint64_t>(ax.card));
        check_budget(what, saturating_product(f), budget_);

        enumerate_multisets(p_->dist, n_ - 1, budget_, what,
                            [&](std::span<const int> counts, double m0) {
            int pos = 0;
            for (int z = 0; z < d; ++z)
                for (int c = 0; c < counts[static_cast<size_t>(z)]; ++c) {
                    if (pos == i) ++pos;
                    ex.zplus[static_cast<size_t>(pos++)] = z;
                }
            odometer(p_->dist, p_->alg.seed_mass, axes, ex, m0, [&](double m) {
                ex.extract(key);
                table.add(key, m);
            });
        });
    } else {
        auto axes = ordered_axes(nd, n_, i, d, seeds);
        std::vector<uint64_t> f;
        for (const auto& ax : axes) f.push_back(static_cast<uint64_t>(ax.card));
        check_budget(what, saturating_product(f), budget_);
        odometer(p_->dist, p_->alg.seed_mass, axes, ex, 1.0, [&](double m) {
            ex.extract(key);
            table.add(key, m);
        });
    }
    table.validate();
    return table;
}

InfoEstimate ProtocolContext::quantity_exact(Quantity q, int i) {
    QuantitySpec spec = spec_for(q);
    JointTable t = build(quantity_is_per_row(q) ? i : 0, spec.vars, quantity_name(q));
    InfoEstimate est;
    est.quantity = quantity_name(q);
    est.index = quantity_is_per_row(q) ? i : -1;
    est.method = "exact";
    est.value = spec.z.empty() ? mutual_info(t, spec.x, spec.y)
                               : cond_mutual_info(t, spec.x, spec.y, spec.z);
    return est;
}

DisintegratedCmi ProtocolContext::quantity_disintegrated(Quantity q, int i,
                                                         JointTable* table_out) {
    QuantitySpec spec = spec_for(q);
    if (spec.dis_axis < 0)
        throw std::invalid_argument(std::string("quantity '") + quantity_name(q) +
                                    "' has no disintegrated variant");
    JointTable t = build(quantity_is_per_row(q) ? i : 0, spec.vars, quantity_name(q));
    DisintegratedCmi dis = disintegrate_cmi(t, spec.x, spec.y, spec.dis_axis);
    if (table_out) *table_out = std::move(t);
    return dis;
}

InfoEstimate ProtocolContext::plugin_estimate(Quantity q, int i, long samples,
                                              uint64_t seed) {
    if (samples < 100)
        throw std::invalid_argument("plugin_estimate: needs at least 100 samples");
    QuantitySpec spec = spec_for(q);
    if (!quantity_is_per_row(q)) i = 0;
    Needs nd = analyze(spec.vars, *p_);
    Extractor ex(*this, i, spec.vars, nd);
    auto axes = ordered_axes(nd, n_, i, p_->dist.size(), p_->alg.seeds());

    Rng rng(seed);
    auto cdf = cumulative(p_->dist.mass);
    auto seed_cdf = cumulative(p_->alg.seed_mass);

    // one pass of draws, cells interned to dense ids
    std::unordered_map<TupleKey, int, TupleKeyHash> cell_ids;
    std::vector<TupleKey> cell_keys;
    std::vector<int32_t> draw_cell(static_cast<size_t>(samples));
    TupleKey key;
    for (long k = 0; k < samples; ++k) {
        for (const auto& ax : axes) {
            switch (ax.kind) {
                case AxisRef::PlusSlot:
                    ex.zplus[static_cast<size_t>(ax.slot)] = rng.weighted(cdf);
                    break;
                case AxisRef::MinusSlot:
                    ex.zminus[static_cast<size_t>(ax.slot)] = rng.weighted(cdf);
                    break;
                case AxisRef::SeedAxis:
                    ex.r = rng.weighted(seed_cdf);
                    break;
                case AxisRef::BitSlot:
                    ex.u[static_cast<size_t>(ax.slot)] = rng.unit() < 0.5 ? 0 : 1;
                    break;
            }
        }
        ex.extract(key);
        auto it = cell_ids.find(key);
        int id;
        if (it == cell_ids.end()) {
            id = static_cast<int>(cell_keys.size());
            cell_ids.emplace(key, id);
            cell_keys.push_back(key);
        } else {
            id = it->second;
        }
        draw_cell[static_cast<size_t>(k)] = id;
    }

    const int ncells = static_cast<int>(cell_keys.size());
    // group ids for the marginals the functional needs
    ValueInterner groups;
    std::vector<int32_t> gx(static_cast<size_t>(ncells)), gy(static_cast<size_t>(ncells)),
        gz(static_cast<size_t>(ncells));
    std::vector<int64_t> comp;
    auto group_of = [&](const TupleKey& cell, std::span<const int> varsel, int64_t tag) {
        comp.assign(1, tag);
        for (int v : varsel) comp.push_back(cell[static_cast<size_t>(v)]);
        return static_cast<int32_t>(groups.intern(comp));
    };
    std::vector<int> xz(spec.x.begin(), spec.x.end());
    xz.insert(xz.end(), spec.z.begin(), spec.z.end());
    std::vector<int> yz(spec.y.begin(), spec.y.end());
    yz.insert(yz.end(), spec.z.begin(), spec.z.end());
    for (int c = 0; c < ncells; ++c) {
        gx[static_cast<size_t>(c)] = group_of(cell_keys[static_cast<size_t>(c)], xz, 1);
        gy[static_cast<size_t>(c)] = group_of(cell_keys[static_cast<size_t>(c)], yz, 2);
        gz[static_cast<size_t>(c)] = spec.z.empty()
                                         ? 0
                                         : group_of(cell_keys[static_cast<size_t>(c)], spec.z, 3);
    }
    const int ngroups = static_cast<int>(groups.size()) + 1;

    std::vector<int64_t> cell_cnt(static_cast<size_t>(ncells));
    std::vector<int64_t> grp_cnt(static_cast<size_t>(ngroups));
    auto plugin_value = [&]() {
        // I = H(XZ) + H(YZ) - H(Z) - H(XYZ), with H via (1/N) sum c ln c
        const double N = static_cast<double>(samples);
        auto sum_clogc = [&](std::span<const int32_t> grp) {
            std::fill(grp_cnt.begin(), grp_cnt.end(), 0);
            for (int c = 0; c < ncells; ++c)
                grp_cnt[static_cast<size_t>(grp[static_cast<size_t>(c)])] +=
                    cell_cnt[static_cast<size_t>(c)];
            KahanSum s;
            for (int64_t v : grp_cnt)
                if (v > 0) s.add(static_cast<double>(v) * std::log(static_cast<double>(v)));
            return s.value();
        };
        KahanSum cells_clogc;
        for (int64_t v : cell_cnt)
            if (v > 0) cells_clogc.add(static_cast<double>(v) * std::log(static_cast<double>(v)));
        double hxz = std::log(N) - sum_clogc(gx) / N;
        double hyz = std::log(N) - sum_clogc(gy) / N;
        double hxyz = std::log(N) - cells_clogc.value() / N;
        double hz = spec.z.empty() ? 0.0 : std::log(N) - sum_clogc(gz) / N;
        return clamp_info(hxz + hyz - hz - hxyz);
    };

    std::fill(cell_cnt.begin(), cell_cnt.end(), 0);
    for (int32_t c : draw_cell) ++cell_cnt[static_cast<size_t>(c)];
    InfoEstimate est;
    est.quantity = quantity_name(q);
    est.index = quantity_is_per_row(q) ? i : -1;
    est.samples = samples;
    est.method = "mc(samples=" + std::to_string(samples) + ")";
    est.value = plugin_value();

    const int kResamples = 200;
    KahanSum bs, bs2;
    for (int b = 0; b < kResamples; ++b) {
        std::fill(cell_cnt.begin(), cell_cnt.end(), 0);
        for (long k = 0; k < samples; ++k)
            ++cell_cnt[static_cast<size_t>(draw_cell[rng.index(static_cast<size_t>(samples))])];
        double v = plugin_value();
        bs.add(v);
        bs2.add(v * v);
    }
    double m1 = bs.value() / kResamples;
    double var = bs2.value() / kResamples - m1 * m1;
    est.stderr_ = var > 0 ? std::sqrt(var) : 0.0;
    return est;
}

}  // namespace genbound
