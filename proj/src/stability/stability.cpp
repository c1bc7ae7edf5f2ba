#include "stability/stability.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace genbound {

namespace {

inline int64_t pair_key(int a, int b) {
    return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
}

// Accumulators for one marked row.
struct RowScan {
    double beta1 = 0.0, beta2 = 0.0;
    double gamma4_sq = 0.0;
    struct PairStat {
        double prob = 0.0;
        std::vector<uint64_t> z_seen;  // bitmask over realized Z+_i values
    };
    std::unordered_map<int64_t, PairStat> pairs;
    std::unordered_map<int64_t, double> w_prob;  // P(W = w)
};

// Enumerates (others, z_i, z'_i) with all seeds trained per outcome, feeding
// the uniform-stability sups and the conditional pair law.
RowScan scan_row(const Problem& p, int n, int i, uint64_t budget, Trainer& trainer) {
    const auto& dist = p.dist;
    const int d = dist.size();
    const auto& seeds = p.alg.seed_mass;
    const int ns = static_cast<int>(seeds.size());
    const int words = (d + 63) / 64;

    uint64_t ctx_count = p.alg.symmetric ? multiset_count(d, n - 1)
                                         : tuple_count(dist, n - 1);
    check_budget("stability", saturating_product(std::array<uint64_t, 4>{
                                  ctx_count, static_cast<uint64_t>(d),
                                  static_cast<uint64_t>(d), static_cast<uint64_t>(ns)}),
                 budget);

    RowScan scan;
    KahanSum g4;
    std::vector<int> wp(static_cast<size_t>(ns)), wm(static_cast<size_t>(ns));
    Sample sample(static_cast<size_t>(n));

    auto visit_context = [&](double m_ctx) {
        // sample slots != i already hold the unmarked rows
        for (int zp = 0; zp < d; ++zp) {
            sample[static_cast<size_t>(i)] = zp;
            double m_zp = m_ctx * dist.mass[static_cast<size_t>(zp)];
            for (int r = 0; r < ns; ++r) wp[static_cast<size_t>(r)] = trainer.train_id(sample, r);
            for (int zm = 0; zm < d; ++zm) {
                sample[static_cast<size_t>(i)] = zm;
                for (int r = 0; r < ns; ++r) wm[static_cast<size_t>(r)] = trainer.train_id(sample, r);
                sample[static_cast<size_t>(i)] = zp;
                double m_pair = m_zp * dist.mass[static_cast<size_t>(zm)];

                for (int z = 0; z < d; ++z) {
                    double mean_abs = 0.0;
                    for (int r = 0; r < ns; ++r) {
                        double gap = p.loss_at(trainer.hyp(wp[static_cast<size_t>(r)]), z) -
                                     p.loss_at(trainer.hyp(wm[static_cast<size_t>(r)]), z);
                        double a = std::fabs(gap);
                        scan.beta2 = std::max(scan.beta2, a);
                        mean_abs += seeds[static_cast<size_t>(r)] * a;
                    }
                    scan.beta1 = std::max(scan.beta1, mean_abs);
                }
                for (int r = 0; r < ns; ++r) {
                    double m = m_pair * seeds[static_cast<size_t>(r)];
                    int a = wp[static_cast<size_t>(r)], b = wm[static_cast<size_t>(r)];
                    double gap_zp = p.loss_at(trainer.hyp(a), zp) - p.loss_at(trainer.hyp(b), zp);
                    g4.add(m * gap_zp * gap_zp);
                    auto& ps = scan.pairs[pair_key(a, b)];
                    if (ps.z_seen.empty()) ps.z_seen.assign(static_cast<size_t>(words), 0);
                    ps.prob += m;
                    ps.z_seen[static_cast<size_t>(zp >> 6)] |= 1ULL << (zp & 63);
                    scan.w_prob[a] += m;
                }
            }
        }
    };

    if (p.alg.symmetric) {
        enumerate_multisets(dist, n - 1, budget, "stability",
                            [&](std::span<const int> counts, double m) {
            int pos = 0;
            for (int z = 0; z < d; ++z)
                for (int c = 0; c < counts[static_cast<size_t>(z)]; ++c) {
                    if (pos == i) ++pos;
                    sample[static_cast<size_t>(pos++)] = z;
                }
            visit_context(m);
        });
    } else {
        enumerate_tuples(dist, n - 1, budget, "stability",
                         [&](std::span<const int> others, double m) {
            int pos = 0;
            for (int j = 0; j < n - 1; ++j) {
                if (pos == i) ++pos;
                sample[static_cast<size_t>(pos++)] = others[static_cast<size_t>(j)];
            }
            visit_context(m);
        });
    }
    scan.gamma4_sq = g4.value();
    return scan;
}

struct RowGammas {
    double gamma1, gamma2, gamma3, gamma4;
};

RowGammas gammas_from_scan(const Problem& p, const RowScan& scan, Trainer& trainer) {
    const auto& dist = p.dist;
    const int d = dist.size();

    // conditional mean loss of the neighbor hypothesis given W = w
    std::unordered_map<int64_t, std::vector<double>> cond_sum;
    for (const auto& [key, ps] : scan.pairs) {
        int b = static_cast<int>(key & 0xffffffff);
        auto& acc = cond_sum[key >> 32];
        if (acc.empty()) acc.assign(static_cast<size_t>(d), 0.0);
        const Hypothesis& hb = trainer.hyp(b);
        for (int z = 0; z < d; ++z) acc[static_cast<size_t>(z)] += ps.prob * p.loss_at(hb, z);
    }

    double g1 = 0.0;
    KahanSum g2;
    for (const auto& [w, pw] : scan.w_prob) {
        const Hypothesis& hw = trainer.hyp(static_cast<int>(w));
        const auto& acc = cond_sum[w];
        for (int z = 0; z < d; ++z) {
            double diff = p.loss_at(hw, z) - acc[static_cast<size_t>(z)] / pw;
            g1 = std::max(g1, std::fabs(diff));
            g2.add(pw * dist.mass[static_cast<size_t>(z)] * diff * diff);
        }
    }

    KahanSum g3;
    for (const auto& [key, ps] : scan.pairs) {
        int a = static_cast<int>(key >> 32);
        int b = static_cast<int>(key & 0xffffffff);
        const Hypothesis& ha = trainer.hyp(a);
        const Hypothesis& hb = trainer.hyp(b);
        double sup = 0.0;
        for (int z = 0; z < d; ++z) {
            if (!(ps.z_seen[static_cast<size_t>(z >> 6)] & (1ULL << (z & 63)))) continue;
            sup = std::max(sup, std::fabs(p.loss_at(ha, z) - p.loss_at(hb, z)));
        }
        g3.add(ps.prob * sup);
    }

    return {g1, std::sqrt(std::max(0.0, g2.value())), g3.value(),
            std::sqrt(std::max(0.0, scan.gamma4_sq))};
}

}  // namespace

StabilityReport stability_exact(const Problem& p, int n, uint64_t budget) {
    if (n < 1) throw std::invalid_argument("stability: n must be >= 1");
    HypothesisRegistry reg;
    Trainer trainer(p, reg);
    StabilityReport rep;
    rep.n = n;

    std::vector<int> rows;
    if (p.alg.symmetric)
        rows.push_back(n - 1);
    else
        for (int i = 0; i < n; ++i) rows.push_back(i);

    for (int i : rows) {
        RowScan scan = scan_row(p, n, i, budget, trainer);
        RowGammas g = gammas_from_scan(p, scan, trainer);
        rep.beta1 = std::max(rep.beta1, scan.beta1);
        rep.beta2 = std::max(rep.beta2, scan.beta2);
        rep.gamma1 = std::max(rep.gamma1, g.gamma1);
        rep.gamma2 = std::max(rep.gamma2, g.gamma2);
        rep.gamma3 = std::max(rep.gamma3, g.gamma3);
        rep.gamma4 = std::max(rep.gamma4, g.gamma4);
    }
    rep.observed_gamma4_le_gamma3 = rep.gamma4 <= rep.gamma3 + 1e-12;
    rep.observed_gamma2_le_gamma4 = rep.gamma2 <= rep.gamma4 + 1e-12;
    return rep;
}

DeltaInfo delta_tables(const Problem& p, int n, int i, uint64_t budget, Trainer& trainer) {
    struct Acc {
        double prob = 0.0;
        double delta1 = 0.0;
        double gap_sq = 0.0;  // mass-weighted, over the mask-selected instance
    };
    std::unordered_map<int64_t, Acc> pairs;
    const int d = p.dist.size();
    std::vector<double> delta2(static_cast<size_t>(d), 0.0);

    for_each_neighbor_outcome(
        p, n, i, budget, "delta_tables", trainer,
        [&](int wp, int wm, int zp, int zm, double m) {
            const Hypothesis& hp = trainer.hyp(wp);
            const Hypothesis& hm = trainer.hyp(wm);
            double gap_p = p.loss_at(hm, zp) - p.loss_at(hp, zp);
            double gap_m = p.loss_at(hm, zm) - p.loss_at(hp, zm);
            auto& acc = pairs[pair_key(wp, wm)];
            acc.prob += m;
            // Zhat_i covers both columns with a fair mask bit
            acc.delta1 = std::max({acc.delta1, std::fabs(gap_p), std::fabs(gap_m)});
            acc.gap_sq += m * 0.5 * (gap_p * gap_p + gap_m * gap_m);
            delta2[static_cast<size_t>(zp)] = std::max(delta2[static_cast<size_t>(zp)],
                                                       std::fabs(gap_p));
        });

    DeltaInfo info;
    info.delta2 = std::move(delta2);
    KahanSum e1, e1sq, e2sq;
    std::vector<int64_t> keys;
    keys.reserve(pairs.size());
    for (const auto& [k, _] : pairs) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (int64_t k : keys) {
        const Acc& acc = pairs[k];
        DeltaInfo::PairRow row;
        row.w_plus = static_cast<int>(k >> 32);
        row.w_minus = static_cast<int>(k & 0xffffffff);
        row.prob = acc.prob;
        row.delta1 = acc.delta1;
        row.gap_sq_mean = acc.gap_sq / acc.prob;
        row.lambda = acc.delta1 > 0.0 ? row.gap_sq_mean / (acc.delta1 * acc.delta1) : 0.0;
        info.lambda_max = std::max(info.lambda_max, row.lambda);
        e1.add(row.prob * row.delta1);
        e1sq.add(row.prob * row.delta1 * row.delta1);
        info.pairs.push_back(row);
    }
    info.e_delta1 = e1.value();
    info.e_delta1_sq = e1sq.value();
    for (int z = 0; z < d; ++z) {
        e2sq.add(p.dist.mass[static_cast<size_t>(z)] * info.delta2[static_cast<size_t>(z)] *
                 info.delta2[static_cast<size_t>(z)]);
        info.delta2_max = std::max(info.delta2_max, info.delta2[static_cast<size_t>(z)]);
    }
    info.e_delta2_sq = e2sq.value();
    return info;
}

double beta_mc(const Problem& p, int n, long samples, uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("beta_mc: samples must be >= 1");
    if (n < 1) throw std::invalid_argument("beta_mc: n must be >= 1");
    HypothesisRegistry reg;
    Trainer trainer(p, reg);
    Rng rng(seed);
    auto cdf = cumulative(p.dist.mass);
    auto seed_cdf = cumulative(p.alg.seed_mass);
    Sample sample(static_cast<size_t>(n));
    double best = 0.0;
    for (long k = 0; k < samples; ++k) {
        for (int j = 0; j < n; ++j) sample[static_cast<size_t>(j)] = rng.weighted(cdf);
        int i = static_cast<int>(rng.index(static_cast<size_t>(n)));
        int zrep = rng.weighted(cdf);
        int z = rng.weighted(cdf);
        int r = rng.weighted(seed_cdf);
        int wa = trainer.train_id(sample, r);
        int keep = sample[static_cast<size_t>(i)];
        sample[static_cast<size_t>(i)] = zrep;
        int wb = trainer.train_id(sample, r);
        sample[static_cast<size_t>(i)] = keep;
        best = std::max(best, std::fabs(p.loss_at(trainer.hyp(wa), z) -
                                        p.loss_at(trainer.hyp(wb), z)));
    }
    return best;
}

}  // namespace genbound
