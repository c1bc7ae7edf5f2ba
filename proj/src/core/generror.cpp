#include "core/generror.hpp"

#include <cmath>

namespace genbound {

double population_risk(const Problem& p, const Hypothesis& h) {
    KahanSum acc;
    for (int z = 0; z < p.dist.size(); ++z)
        acc.add(p.dist.mass[static_cast<size_t>(z)] * p.loss_at(h, z));
    return acc.value();
}

double empirical_risk(const Problem& p, const Hypothesis& h, std::span<const int> sample) {
    if (sample.empty()) throw std::invalid_argument("empirical_risk: empty sample");
    KahanSum acc;
    for (int z : sample) acc.add(p.loss_at(h, z));
    return acc.value() / static_cast<double>(sample.size());
}

void for_each_neighbor_outcome(
    const Problem& p, int n, int i, uint64_t budget, const char* what, Trainer& trainer,
    const std::function<void(int, int, int, int, double)>& fn) {
    const auto& dist = p.dist;
    const int d = dist.size();
    const auto& seeds = p.alg.seed_mass;

    if (p.alg.symmetric) {
        uint64_t outcomes = saturating_product(std::array<uint64_t, 4>{
            multiset_count(d, n - 1), static_cast<uint64_t>(d),
            static_cast<uint64_t>(d), static_cast<uint64_t>(seeds.size())});
        check_budget(what, outcomes, budget);
        Sample sample(static_cast<size_t>(n));
        enumerate_multisets(dist, n - 1, budget, what,
                            [&](std::span<const int> counts, double m_others) {
            int pos = 0;
            for (int z = 0; z < d; ++z)
                for (int c = 0; c < counts[static_cast<size_t>(z)]; ++c)
                    sample[static_cast<size_t>(pos++)] = z;
            for (int zp = 0; zp < d; ++zp) {
                sample[static_cast<size_t>(n - 1)] = zp;
                double m_zp = m_others * dist.mass[static_cast<size_t>(zp)];
                for (int r = 0; r < static_cast<int>(seeds.size()); ++r) {
                    int wp = trainer.train_id(sample, r);
                    double m_r = m_zp * seeds[static_cast<size_t>(r)];
                    for (int zm = 0; zm < d; ++zm) {
                        sample[static_cast<size_t>(n - 1)] = zm;
                        int wm = trainer.train_id(sample, r);
                        sample[static_cast<size_t>(n - 1)] = zp;
                        fn(wp, wm, zp, zm, m_r * dist.mass[static_cast<size_t>(zm)]);
                    }
                }
            }
        });
        return;
    }

    uint64_t outcomes = saturating_product(std::array<uint64_t, 3>{
        tuple_count(dist, n), static_cast<uint64_t>(d),
        static_cast<uint64_t>(seeds.size())});
    check_budget(what, outcomes, budget);
    Sample scratch;
    enumerate_tuples(dist, n, budget, what, [&](std::span<const int> ids, double m_s) {
        scratch.assign(ids.begin(), ids.end());
        const int zp = scratch[static_cast<size_t>(i)];
        for (int r = 0; r < static_cast<int>(seeds.size()); ++r) {
            int wp = trainer.train_id(scratch, r);
            double m_r = m_s * seeds[static_cast<size_t>(r)];
            for (int zm = 0; zm < d; ++zm) {
                scratch[static_cast<size_t>(i)] = zm;
                int wm = trainer.train_id(scratch, r);
                scratch[static_cast<size_t>(i)] = zp;
                fn(wp, wm, zp, zm, m_r * dist.mass[static_cast<size_t>(zm)]);
            }
        }
    });
}

namespace {

struct RowAccum {
    KahanSum standard, masked_data, masked_hyp, flipped;
};

void accumulate_row(const Problem& p, int n, int i, uint64_t budget, Trainer& trainer,
                    RowAccum& acc) {
    for_each_neighbor_outcome(
        p, n, i, budget, "gen_error", trainer,
        [&](int wp, int wm, int zp, int zm, double m) {
            const auto& hp = trainer.hyp(wp);
            const auto& hm = trainer.hyp(wm);
            double lp_zp = p.loss_at(hp, zp), lm_zp = p.loss_at(hm, zp);
            double lp_zm = p.loss_at(hp, zm), lm_zm = p.loss_at(hm, zm);
            double gap_plus = lm_zp - lp_zp;
            acc.standard.add(m * gap_plus);
            // the fair mask bit averages analytically per row: (-1)^u with the
            // u-selected evaluation instance / hypothesis role
            acc.masked_data.add(m * 0.5 * (gap_plus - (lm_zm - lp_zm)));
            acc.masked_hyp.add(m * 0.5 * (gap_plus - (lp_zp - lm_zp)));
            acc.flipped.add(m * (lp_zm - lm_zm));
        });
}

}  // namespace

GenErrorRows gen_error_rows(const Problem& p, int n, uint64_t budget) {
    if (n < 1) throw std::invalid_argument("gen_error: n must be >= 1");
    HypothesisRegistry reg;
    Trainer trainer(p, reg);
    GenErrorRows rows;
    rows.standard.resize(static_cast<size_t>(n));
    rows.flipped.resize(static_cast<size_t>(n));
    if (p.alg.symmetric) {
        RowAccum acc;
        accumulate_row(p, n, n - 1, budget, trainer, acc);
        for (int i = 0; i < n; ++i) {
            rows.standard[static_cast<size_t>(i)] = acc.standard.value();
            rows.flipped[static_cast<size_t>(i)] = acc.flipped.value();
        }
        return rows;
    }
    for (int i = 0; i < n; ++i) {
        RowAccum acc;
        accumulate_row(p, n, i, budget, trainer, acc);
        rows.standard[static_cast<size_t>(i)] = acc.standard.value();
        rows.flipped[static_cast<size_t>(i)] = acc.flipped.value();
    }
    return rows;
}

RiskReport gen_error_exact(const Problem& p, int n, uint64_t budget) {
    if (n < 1) throw std::invalid_argument("gen_error: n must be >= 1");
    HypothesisRegistry reg;
    Trainer trainer(p, reg);
    RiskReport rep;

    KahanSum std_sum, data_sum, hyp_sum;
    auto add_row = [&](int i) {
        RowAccum acc;
        accumulate_row(p, n, i, budget, trainer, acc);
        std_sum.add(acc.standard.value());
        data_sum.add(acc.masked_data.value());
        hyp_sum.add(acc.masked_hyp.value());
    };
    if (p.alg.symmetric) {
        add_row(n - 1);
        rep.gen_standard = std_sum.value();
        rep.gen_masked_data = data_sum.value();
        rep.gen_masked_hyp = hyp_sum.value();
    } else {
        for (int i = 0; i < n; ++i) add_row(i);
        rep.gen_standard = std_sum.value() / n;
        rep.gen_masked_data = data_sum.value() / n;
        rep.gen_masked_hyp = hyp_sum.value() / n;
    }

    // L_mu and Lhat_n straight from the definitions
    KahanSum pop, emp;
    const auto& seeds = p.alg.seed_mass;
    auto visit_sample = [&](std::span<const int> sample, double m_s) {
        for (int r = 0; r < static_cast<int>(seeds.size()); ++r) {
            const Hypothesis& h = trainer.hyp(trainer.train_id(sample, r));
            double m = m_s * seeds[static_cast<size_t>(r)];
            pop.add(m * population_risk(p, h));
            emp.add(m * empirical_risk(p, h, sample));
        }
    };
    if (p.alg.symmetric) {
        Sample sample(static_cast<size_t>(n));
        enumerate_multisets(p.dist, n, budget, "gen_error", [&](std::span<const int> counts, double m_s) {
            int pos = 0;
            for (int z = 0; z < p.dist.size(); ++z)
                for (int c = 0; c < counts[static_cast<size_t>(z)]; ++c)
                    sample[static_cast<size_t>(pos++)] = z;
            visit_sample(sample, m_s);
        });
    } else {
        enumerate_tuples(p.dist, n, budget, "gen_error", visit_sample);
    }
    rep.expected_population = pop.value();
    rep.expected_empirical = emp.value();
    rep.method = "exact";
    return rep;
}

double second_moment_exact(const Problem& p, int n, uint64_t budget) {
    if (n < 1) throw std::invalid_argument("second_moment: n must be >= 1");
    HypothesisRegistry reg;
    Trainer trainer(p, reg);
    KahanSum acc;
    const auto& seeds = p.alg.seed_mass;
    auto visit = [&](std::span<const int> sample, double m_s) {
        for (int r = 0; r < static_cast<int>(seeds.size()); ++r) {
            const Hypothesis& h = trainer.hyp(trainer.train_id(sample, r));
            double gap = population_risk(p, h) - empirical_risk(p, h, sample);
            acc.add(m_s * seeds[static_cast<size_t>(r)] * gap * gap);
        }
    };
    if (p.alg.symmetric) {
        Sample sample(static_cast<size_t>(n));
        enumerate_multisets(p.dist, n, budget, "second_moment",
                            [&](std::span<const int> counts, double m_s) {
                                int pos = 0;
                                for (int z = 0; z < p.dist.size(); ++z)
                                    for (int c = 0; c < counts[static_cast<size_t>(z)]; ++c)
                                        sample[static_cast<size_t>(pos++)] = z;
                                visit(sample, m_s);
                            });
    } else {
        enumerate_tuples(p.dist, n, budget, "second_moment", visit);
    }
    return acc.value();
}

RiskReport gen_error_mc(const Problem& p, int n, long samples, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_error: n must be >= 1");
    if (samples < 1) throw std::invalid_argument("gen_error_mc: samples must be >= 1");
    HypothesisRegistry reg;
    Trainer trainer(p, reg);
    Rng rng(seed);
    auto cdf = cumulative(p.dist.mass);
    auto seed_cdf = cumulative(p.alg.seed_mass);

    std::vector<double> std_vals(static_cast<size_t>(samples));
    KahanSum data_sum, hyp_sum, pop_sum, emp_sum;
    Sample sample(static_cast<size_t>(n));
    for (long k = 0; k < samples; ++k) {
        for (int j = 0; j < n; ++j) sample[static_cast<size_t>(j)] = rng.weighted(cdf);
        int i = static_cast<int>(rng.index(static_cast<size_t>(n)));
        int zm = rng.weighted(cdf);
        int r = rng.weighted(seed_cdf);
        int u = rng.unit() < 0.5 ? 0 : 1;
        int zp = sample[static_cast<size_t>(i)];
        int wp = trainer.train_id(sample, r);
        sample[static_cast<size_t>(i)] = zm;
        int wm = trainer.train_id(sample, r);
        sample[static_cast<size_t>(i)] = zp;
        const auto& hp = trainer.hyp(wp);
        const auto& hm = trainer.hyp(wm);
        double gap_plus = p.loss_at(hm, zp) - p.loss_at(hp, zp);
        std_vals[static_cast<size_t>(k)] = gap_plus;
        int zhat = u ? zm : zp;
        double sign = u ? -1.0 : 1.0;
        data_sum.add(sign * (p.loss_at(hm, zhat) - p.loss_at(hp, zhat)));
        // mask-for-weight form: roles of the pair swap with u
        const auto& hsel = u ? hm : hp;
        const auto& hbar = u ? hp : hm;
        hyp_sum.add(sign * (p.loss_at(hbar, zp) - p.loss_at(hsel, zp)));
        pop_sum.add(population_risk(p, hp));
        emp_sum.add(empirical_risk(p, hp, sample));
    }

    RiskReport rep;
    KahanSum std_sum;
    for (double v : std_vals) std_sum.add(v);
    double inv = 1.0 / static_cast<double>(samples);
    rep.gen_standard = std_sum.value() * inv;
    rep.gen_masked_data = data_sum.value() * inv;
    rep.gen_masked_hyp = hyp_sum.value() * inv;
    rep.expected_population = pop_sum.value() * inv;
    rep.expected_empirical = emp_sum.value() * inv;
    rep.samples = samples;
    rep.method = "mc";

    // bootstrap standard error of the standard-form mean, 200 resamples
    const int kResamples = 200;
    KahanSum bs, bs2;
    for (int b = 0; b < kResamples; ++b) {
        KahanSum acc;
        for (long k = 0; k < samples; ++k)
            acc.add(std_vals[rng.index(static_cast<size_t>(samples))]);
        double mean = acc.value() * inv;
        bs.add(mean);
        bs2.add(mean * mean);
    }
    double m1 = bs.value() / kResamples;
    double var = bs2.value() / kResamples - m1 * m1;
    rep.stderr_ = var > 0 ? std::sqrt(var) : 0.0;
    return rep;
}

}  // namespace genbound
