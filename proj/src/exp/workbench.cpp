#include "exp/workbench.hpp"

#include <algorithm>
#include <cmath>

namespace genbound {

Workbench::Workbench(ExampleSetup setup, uint64_t budget)
    : setup_(std::move(setup)), budget_(budget) {
    ctx_ = std::make_unique<ProtocolContext>(setup_.problem, setup_.n, budget_);
}

const RiskReport& Workbench::risk() {
    if (!risk_) risk_ = gen_error_exact(problem(), n(), budget_);
    return *risk_;
}

const GenErrorRows& Workbench::gen_rows() {
    if (!gen_rows_) gen_rows_ = gen_error_rows(problem(), n(), budget_);
    return *gen_rows_;
}

double Workbench::second_moment() {
    if (!second_moment_) second_moment_ = second_moment_exact(problem(), n(), budget_);
    return *second_moment_;
}

const StabilityReport& Workbench::stability() {
    if (!stability_) stability_ = stability_exact(problem(), n(), budget_);
    return *stability_;
}

const DeltaInfo& Workbench::deltas(int i) {
    if (problem().alg.symmetric) i = 0;
    auto it = deltas_.find(i);
    if (it == deltas_.end())
        it = deltas_.emplace(i, delta_tables(problem(), n(), i, budget_, ctx_->trainer())).first;
    return it->second;
}

const LossRenorm& Workbench::renorm() {
    if (!renorm_) renorm_ = renorm_to_unit(problem().loss);
    return *renorm_;
}

int Workbench::row_key(Quantity q, int i) const {
    if (!quantity_is_per_row(q)) return -1;
    return problem().alg.symmetric ? 0 : i;
}

InfoEstimate Workbench::quantity(Quantity q, int i) {
    auto key = std::make_pair(static_cast<int>(q), row_key(q, i));
    auto it = quantities_.find(key);
    if (it == quantities_.end())
        it = quantities_.emplace(key, ctx_->quantity_exact(q, std::max(0, key.second))).first;
    InfoEstimate est = it->second;
    est.index = quantity_is_per_row(q) ? i : -1;
    return est;
}

std::vector<double> Workbench::per_row_values(Quantity q) {
    std::vector<double> out(static_cast<size_t>(n()));
    for (int i = 0; i < n(); ++i) out[static_cast<size_t>(i)] = quantity(q, i).value;
    return out;
}

std::vector<HypCmiRow> Workbench::hyp_cmi_rows() {
    std::vector<HypCmiRow> rows(static_cast<size_t>(n()));
    const bool sym = problem().alg.symmetric;
    for (int i = 0; i < n(); ++i) {
        if (sym && i > 0) {
            rows[static_cast<size_t>(i)] = rows[0];
            continue;
        }
        DisintegratedCmi dis = ctx_->quantity_disintegrated(Quantity::HypCmi, i);
        const DeltaInfo& dt = deltas(i);
        std::unordered_map<int64_t, const DeltaInfo::PairRow*> lookup;
        for (const auto& pr : dt.pairs)
            lookup[(static_cast<int64_t>(pr.w_plus) << 32) |
                   static_cast<uint32_t>(pr.w_minus)] = &pr;
        HypCmiRow& row = rows[static_cast<size_t>(i)];
        row.cmi = quantity(Quantity::HypCmi, i).value;
        row.sup_dis = dis.maximum;
        row.e_delta1 = dt.e_delta1;
        row.e_delta1_sq = dt.e_delta1_sq;
        for (size_t k = 0; k < dis.z_ids.size(); ++k) {
            auto comp = ctx_->composites().value(dis.z_ids[k]);
            // composite layout: {tag, w_plus, w_minus}
            int64_t pk = (comp[1] << 32) | static_cast<uint32_t>(comp[2]);
            auto hit = lookup.find(pk);
            if (hit == lookup.end())
                throw std::logic_error("hypothesis pair missing from the delta table");
            row.weight.push_back(dis.weight[k]);
            row.dis.push_back(dis.value[k]);
            row.delta1.push_back(hit->second->delta1);
            row.lambda.push_back(hit->second->lambda);
        }
    }
    return rows;
}

std::vector<SsCmiRow> Workbench::ss_cmi_rows() {
    std::vector<SsCmiRow> rows(static_cast<size_t>(n()));
    const bool sym = problem().alg.symmetric;
    for (int i = 0; i < n(); ++i) {
        if (sym && i > 0) {
            rows[static_cast<size_t>(i)] = rows[0];
            continue;
        }
        DisintegratedCmi dis = ctx_->quantity_disintegrated(Quantity::SsCmi, i);
        const DeltaInfo& dt = deltas(i);
        SsCmiRow& row = rows[static_cast<size_t>(i)];
        row.cmi = quantity(Quantity::SsCmi, i).value;
        row.e_delta2_sq = dt.e_delta2_sq;
        for (size_t k = 0; k < dis.z_ids.size(); ++k) {
            int z = static_cast<int>(dis.z_ids[k]);
            row.weight.push_back(dis.weight[k]);
            row.dis.push_back(dis.value[k]);
            row.delta2.push_back(dt.delta2[static_cast<size_t>(z)]);
        }
    }
    return rows;
}

std::vector<LdRow> Workbench::ld_rows() {
    std::vector<LdRow> rows(static_cast<size_t>(n()));
    const bool sym = problem().alg.symmetric;
    for (int i = 0; i < n(); ++i) {
        if (sym && i > 0) {
            rows[static_cast<size_t>(i)] = rows[0];
            continue;
        }
        DisintegratedCmi dis = ctx_->quantity_disintegrated(Quantity::LdCmi, i);
        LdRow& row = rows[static_cast<size_t>(i)];
        row.mi = quantity(Quantity::LdMi, i).value;
        row.cmi = quantity(Quantity::LdCmi, i).value;
        row.weight = dis.weight;
        row.dis = dis.value;
    }
    return rows;
}

std::pair<double, VecCmiByMatrix> Workbench::vec_cmi_by_matrix() {
    DisintegratedCmi dis = ctx_->quantity_disintegrated(Quantity::VecCmi, 0);
    const double scale = renorm().scale;
    VecCmiByMatrix vc;
    std::vector<std::unordered_map<int64_t, double>> delta1_of(static_cast<size_t>(n()));
    for (int i = 0; i < n(); ++i)
        for (const auto& pr : deltas(i).pairs)
            delta1_of[static_cast<size_t>(i)][(static_cast<int64_t>(pr.w_plus) << 32) |
                                              static_cast<uint32_t>(pr.w_minus)] = pr.delta1;
    for (size_t k = 0; k < dis.z_ids.size(); ++k) {
        auto comp = ctx_->composites().value(dis.z_ids[k]);
        // composite layout: {tag, w_plus, w_minus_1 .. w_minus_n}
        KahanSum sq;
        for (int i = 0; i < n(); ++i) {
            int64_t pk = (comp[1] << 32) | static_cast<uint32_t>(comp[static_cast<size_t>(2 + i)]);
            auto hit = delta1_of[static_cast<size_t>(i)].find(pk);
            if (hit == delta1_of[static_cast<size_t>(i)].end())
                throw std::logic_error("matrix row missing from the delta table");
            double d1 = hit->second / scale;
            sq.add(d1 * d1);
        }
        vc.weight.push_back(dis.weight[k]);
        vc.dis.push_back(dis.value[k]);
        vc.dbar1.push_back(sq.value() / n());
    }
    return {quantity(Quantity::VecCmi, 0).value, vc};
}

std::vector<SeedDisintegration> Workbench::seed_disintegrations() {
    std::vector<SeedDisintegration> rows(static_cast<size_t>(n()));
    const bool sym = problem().alg.symmetric;
    const Var vars[] = {Var::WPlus, Var::ZPlusI, Var::Seed};
    const int x[] = {0}, y[] = {1};
    for (int i = 0; i < n(); ++i) {
        if (sym && i > 0) {
            rows[static_cast<size_t>(i)] = rows[0];
            continue;
        }
        JointTable t = ctx_->build(i, vars, "iomi_disintegrated");
        DisintegratedCmi dis = disintegrate_cmi(t, x, y, 2);
        rows[static_cast<size_t>(i)].weight = dis.weight;
        rows[static_cast<size_t>(i)].value = dis.value;
    }
    return rows;
}

std::vector<std::pair<int, double>> Workbench::hypothesis_law() {
    const Var vars[] = {Var::WPlus};
    JointTable t = ctx_->build(0, vars, "hypothesis_law");
    std::vector<std::pair<int, double>> law;
    law.reserve(t.cells.size());
    for (const auto& [k, m] : t.cells) law.emplace_back(static_cast<int>(k[0]), m);
    std::sort(law.begin(), law.end());
    return law;
}

const BernsteinFit& Workbench::bernstein_fit() {
    if (!bernstein_) {
        auto law = hypothesis_law();
        bernstein_ = fit_bernstein(problem(), law, ctx_->trainer(), 1.0, renorm());
    }
    return *bernstein_;
}

double Workbench::fvec_cmi() {
    const Var vars[] = {Var::FVecPair, Var::UVec, Var::ZPlusVec};
    JointTable t = ctx_->build(0, vars, "fvec_cmi");
    const int x[] = {0}, y[] = {1}, z[] = {2};
    return cond_mutual_info(t, x, y, z);
}

}  // namespace genbound
