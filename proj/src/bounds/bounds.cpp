#include "bounds/bounds.hpp"

#include <algorithm>

namespace genbound {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

BoundReport not_applicable(const char* id, const char* thm, const std::string& reason) {
    BoundReport r;
    r.bound_id = id;
    r.theorem_id = thm;
    r.applicable = false;
    r.reason = reason;
    return r;
}

double mean_sqrt(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(std::sqrt(std::max(0.0, x)));
    return s.value() / static_cast<double>(xs.size());
}

double mean(std::span<const double> xs) {
    KahanSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

}  // namespace

double bernstein_h(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bernstein_h: requires x > 0");
    if (x < 1e-4) {
        // (e^x - x - 1)/x^2 = 1/2 + x/6 + x^2/24 + x^3/120 + ...
        return 0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0;
    }
    return (std::exp(x) - x - 1.0) / (x * x);
}

LossRenorm renorm_to_unit(const LossFunction& loss) {
    if (!loss.declared_range)
        throw NotApplicableError("loss has no declared range to renormalize");
    auto [lo, hi] = *loss.declared_range;
    LossRenorm rn;
    rn.shift = -lo;
    rn.scale = hi > lo ? hi - lo : 1.0;
    return rn;
}

BoundReport b_iomi_sch_a(double gamma1, std::span<const double> iomi) {
    if (gamma1 < 0) throw std::invalid_argument("b_iomi_sch_a: negative gamma1");
    BoundReport r;
    r.bound_id = "b_iomi_sch_a";
    r.theorem_id = "thm-3.1";
    r.value = kSqrt2 * gamma1 * mean_sqrt(iomi);
    r.components["gamma1"] = gamma1;
    r.components["mean_sqrt_info"] = mean_sqrt(iomi);
    return r;
}

BoundReport b_iomi_sch_a_cond(double gamma1, std::span<const double> iomi_cond) {
    BoundReport r = b_iomi_sch_a(gamma1, iomi_cond);
    r.bound_id = "b_iomi_sch_a_cond";
    return r;
}

BoundReport b_iomi_uniform(double beta2, std::span<const double> iomi) {
    if (beta2 < 0) throw std::invalid_argument("b_iomi_uniform: negative beta2");
    BoundReport r;
    r.bound_id = "b_iomi_uniform";
    r.theorem_id = "cor-3.2";
    r.value = kSqrt2 * beta2 * mean_sqrt(iomi);
    r.components["beta2"] = beta2;
    return r;
}

BoundReport b_iomi_uniform_jensen(double beta2, double iomi_full, int n) {
    BoundReport r;
    r.bound_id = "b_iomi_uniform_jensen";
    r.theorem_id = "cor-3.2/jensen";
    r.value = kSqrt2 * beta2 * std::sqrt(std::max(0.0, iomi_full) / n);
    r.components["beta2"] = beta2;
    r.components["iomi_full"] = iomi_full;
    return r;
}

BoundReport b_iomi_disintegrated(double beta2,
                                 std::span<const SeedDisintegration> per_row) {
    BoundReport r;
    r.bound_id = "b_iomi_disintegrated";
    r.theorem_id = "thm-3.3";
    KahanSum s;
    for (const auto& row : per_row) {
        KahanSum e;
        for (size_t k = 0; k < row.value.size(); ++k)
            e.add(row.weight[k] * std::sqrt(std::max(0.0, row.value[k])));
        s.add(e.value());
    }
    r.value = kSqrt2 * beta2 * s.value() / static_cast<double>(per_row.size());
    r.components["beta2"] = beta2;
    return r;
}

BoundReport b_iomi_fast(double gamma1, double gamma2, std::span<const double> iomi) {
    if (gamma1 == 0.0)
        return not_applicable("b_iomi_fast", "thm-3.4",
                              "gamma1 = 0: the optimized t = 1/gamma1 is undefined");
    BoundReport r;
    r.bound_id = "b_iomi_fast";
    r.theorem_id = "thm-3.4";
    double h1 = bernstein_h(1.0);
    r.value = gamma1 * mean(iomi) + h1 * gamma2 * gamma2 / gamma1;
    r.components["h1"] = h1;
    r.components["paper_rounded_h1"] = 0.72;
    r.components["info_term"] = gamma1 * mean(iomi);
    r.components["stability_term"] = h1 * gamma2 * gamma2 / gamma1;
    return r;
}

BoundReport baseline_iomi_const(double sigma, std::span<const double> iomi) {
    BoundReport r;
    r.bound_id = "baseline_iomi_const";
    r.theorem_id = "individual-iomi-constant-proxy";
    r.value = kSqrt2 * sigma * mean_sqrt(iomi);
    r.components["sigma"] = sigma;
    return r;
}

BoundReport b_cmi_delta1(std::span<const HypCmiRow> rows) {
    BoundReport r;
    r.bound_id = "b_cmi_delta1";
    r.theorem_id = "thm-4.1";
    KahanSum sum;
    double form1_total = 0.0, form2_total = 0.0;
    for (const auto& row : rows) {
        KahanSum e;
        for (size_t k = 0; k < row.dis.size(); ++k)
            e.add(row.weight[k] * row.delta1[k] * std::sqrt(std::max(0.0, row.dis[k])));
        double form1 = kSqrt2 * e.value();
        double form2 = kSqrt2 * std::sqrt(row.e_delta1_sq * std::max(0.0, row.cmi));
        form1_total += form1;
        form2_total += form2;
        sum.add(std::min(form1, form2));
    }
    double n = static_cast<double>(rows.size());
    r.value = sum.value() / n;
    r.components["form1_disintegrated"] = form1_total / n;
    r.components["form2_aggregate"] = form2_total / n;
    return r;
}

BoundReport b_cmi_sch_c(double gamma3, std::span<const HypCmiRow> rows) {
    BoundReport r;
    r.bound_id = "b_cmi_sch_c";
    r.theorem_id = "thm-4.1/sch-c";
    KahanSum s;
    for (const auto& row : rows) s.add(std::sqrt(std::max(0.0, row.sup_dis)));
    r.value = kSqrt2 * gamma3 * s.value() / static_cast<double>(rows.size());
    r.components["gamma3"] = gamma3;
    return r;
}

BoundReport b_cmi_uniform(double beta2, std::span<const double> hyp_cmi) {
    BoundReport r;
    r.bound_id = "b_cmi_uniform";
    r.theorem_id = "cor-5.2";
    r.value = kSqrt2 * beta2 * mean_sqrt(hyp_cmi);
    r.components["beta2"] = beta2;
    r.components["ceiling_sqrt_2ln2_beta2"] = std::sqrt(2.0 * std::log(2.0)) * beta2;
    return r;
}

BoundReport b_cmi_fast_delta1(std::span<const HypCmiRow> rows) {
    BoundReport r;
    r.bound_id = "b_cmi_fast_delta1";
    r.theorem_id = "thm-4.3/eq-8";
    double h1 = bernstein_h(1.0);
    KahanSum sum;
    KahanSum e_delta1;
    for (const auto& row : rows) {
        KahanSum e;
        for (size_t k = 0; k < row.dis.size(); ++k)
            e.add(row.weight[k] * row.delta1[k] *
                  (std::max(0.0, row.dis[k]) + h1 * row.lambda[k]));
        sum.add(e.value());
        e_delta1.add(row.e_delta1);
    }
    double n = static_cast<double>(rows.size());
    r.value = sum.value() / n;
    r.components["h1"] = h1;
    // ceiling (log 2 + h(1)) * E[Delta_1], the paper's 1.41 gamma_3
    r.components["ceiling_141_gamma3"] =
        (std::log(2.0) + h1) * e_delta1.value() / n;
    return r;
}

BoundReport b_cmi_fast_beta2(double beta2, double gamma4, std::span<const double> hyp_cmi) {
    if (beta2 == 0.0)
        return not_applicable("b_cmi_fast_beta2", "thm-4.3/eq-9",
                              "beta2 = 0: the optimized t = 1/beta2 is undefined");
    BoundReport r;
    r.bound_id = "b_cmi_fast_beta2";
    r.theorem_id = "thm-4.3/eq-9";
    double h1 = bernstein_h(1.0);
    r.value = beta2 * mean(hyp_cmi) + h1 * gamma4 * gamma4 / beta2;
    r.components["h1"] = h1;
    r.components["info_term"] = beta2 * mean(hyp_cmi);
    r.components["stability_term"] = h1 * gamma4 * gamma4 / beta2;
    return r;
}

BoundReport b_ss_cmi_delta2(std::span<const SsCmiRow> rows) {
    BoundReport r;
    r.bound_id = "b_ss_cmi_delta2";
    r.theorem_id = "thm-4.5";
    KahanSum sum;
    for (const auto& row : rows) {
        KahanSum e;
        for (size_t k = 0; k < row.dis.size(); ++k)
            e.add(row.weight[k] * row.delta2[k] * std::sqrt(std::max(0.0, row.dis[k])));
        double form1 = kSqrt2 * e.value();
        double form2 = kSqrt2 * std::sqrt(row.e_delta2_sq * std::max(0.0, row.cmi));
        sum.add(std::min(form1, form2));
    }
    r.value = sum.value() / static_cast<double>(rows.size());
    return r;
}

BoundReport b_ld(double beta2, std::span<const LdRow> rows) {
    BoundReport r;
    r.bound_id = "b_ld";
    r.theorem_id = "thm-6.4";
    KahanSum best, uncond, dis, cond;
    for (const auto& row : rows) {
        double f_mi = std::sqrt(std::max(0.0, row.mi));
        KahanSum e;
        for (size_t k = 0; k < row.dis.size(); ++k)
            e.add(row.weight[k] * std::sqrt(std::max(0.0, row.dis[k])));
        double f_dis = e.value();
        double f_cond = std::sqrt(std::max(0.0, row.cmi));
        best.add(std::min(f_mi, f_dis));
        uncond.add(f_mi);
        dis.add(f_dis);
        cond.add(f_cond);
    }
    double n = static_cast<double>(rows.size());
    r.value = kSqrt2 * beta2 * best.value() / n;
    r.components["form_unconditional"] = kSqrt2 * beta2 * uncond.value() / n;
    r.components["form_disintegrated"] = kSqrt2 * beta2 * dis.value() / n;
    r.components["form_conditional"] = kSqrt2 * beta2 * cond.value() / n;
    r.components["beta2"] = beta2;
    return r;
}

BoundReport b_second_moment(double beta2_unit, double vec_cmi, int n, bool symmetric) {
    if (!symmetric)
        return not_applicable("b_second_moment", "thm-4.4",
                              "algorithm is not symmetric in its sample");
    BoundReport r;
    r.bound_id = "b_second_moment";
    r.theorem_id = "thm-4.4";
    double c = 0.75 * std::log(3.0);  // paper rounds to 0.82
    r.value = 4.0 * beta2_unit * beta2_unit *
                  ((1.5 * vec_cmi + c) / static_cast<double>(n) + 1.0) +
              1.0 / static_cast<double>(n);
    r.components["vec_cmi"] = vec_cmi;
    r.components["beta2_unit"] = beta2_unit;
    r.components["exact_constant"] = c;
    r.components["paper_rounded_constant"] = 0.82;
    return r;
}

BoundReport b_second_moment_strong(const VecCmiByMatrix& vc, double gamma2_unit, int n,
                                   bool symmetric) {
    if (!symmetric)
        return not_applicable("b_second_moment_strong", "thm-D.1",
                              "algorithm is not symmetric in its sample");
    BoundReport r;
    r.bound_id = "b_second_moment_strong";
    r.theorem_id = "thm-D.1";
    KahanSum e;
    double half_log3 = 0.5 * std::log(3.0);
    for (size_t k = 0; k < vc.dis.size(); ++k)
        e.add(vc.weight[k] * vc.dbar1[k] * (std::max(0.0, vc.dis[k]) + half_log3));
    r.value = 6.0 / static_cast<double>(n) * e.value() + 1.0 / static_cast<double>(n) +
              4.0 * gamma2_unit * gamma2_unit;
    r.components["gamma2_unit"] = gamma2_unit;
    return r;
}

BernsteinFit fit_bernstein(const Problem& p,
                           std::span<const std::pair<int, double>> w_law,
                           Trainer& trainer, double kappa, const LossRenorm& rn) {
    if (kappa < 1.0) throw std::invalid_argument("fit_bernstein: kappa must be >= 1");
    if (w_law.empty()) throw std::invalid_argument("fit_bernstein: empty hypothesis law");
    const int d = p.dist.size();
    auto unit_loss = [&](int w, int z) {
        return (p.loss_at(trainer.hyp(w), z) + rn.shift) / rn.scale;
    };
    auto pop = [&](int w) {
        KahanSum s;
        for (int z = 0; z < d; ++z) s.add(p.dist.mass[static_cast<size_t>(z)] * unit_loss(w, z));
        return s.value();
    };

    std::vector<int> candidates;
    for (const auto& [w, _] : w_law) candidates.push_back(w);
    if (p.analytic_minimizer) {
        Hypothesis h = *p.analytic_minimizer;
        candidates.push_back(trainer.registry().intern(std::move(h)));
    }
    int star = candidates.front();
    double best = pop(star);
    for (int w : candidates) {
        double v = pop(w);
        if (v < best - 1e-15) {
            best = v;
            star = w;
        }
    }

    BernsteinFit fit;
    fit.kappa = kappa;
    fit.w_star = star;
    fit.pop_at_star = best;
    KahanSum excess_pow, expected_pop;
    for (const auto& [w, pw] : w_law) {
        double excess = std::max(0.0, pop(w) - best);
        KahanSum sq;
        for (int z = 0; z < d; ++z) {
            double diff = unit_loss(w, z) - unit_loss(star, z);
            sq.add(p.dist.mass[static_cast<size_t>(z)] * diff * diff);
        }
        double num = sq.value();
        double den = std::pow(excess, 1.0 / kappa);
        if (num > 1e-15) {
            if (den <= 0.0)
                fit.finite = false;
            else
                fit.B = std::max(fit.B, num / den);
        }
        excess_pow.add(pw * den);
        expected_pop.add(pw * pop(w));
    }
    fit.excess_mean_pow = excess_pow.value();
    fit.expected_pop = expected_pop.value();
    return fit;
}

double prop62_gamma2(const BernsteinFit& fit) {
    if (!fit.finite) return std::numeric_limits<double>::infinity();
    return std::sqrt(4.0 * fit.B * fit.excess_mean_pow);
}

BoundReport b_bernstein(const BernsteinFit& fit, double C, std::span<const double> iomi) {
    if (fit.kappa != 1.0)
        return not_applicable("b_bernstein", "cor-6.3", "requires kappa = 1");
    if (!fit.finite)
        return not_applicable("b_bernstein", "cor-6.3",
                              "no finite Bernstein constant over the reachable hypotheses");
    BoundReport r;
    r.bound_id = "b_bernstein";
    r.theorem_id = "cor-6.3";
    double excess = fit.expected_pop - fit.pop_at_star;
    r.value = C * mean(iomi) + 2.88 * fit.B / C * excess;
    r.components["B"] = fit.B;
    r.components["excess_risk"] = excess;
    r.components["info_term"] = C * mean(iomi);
    return r;
}

double b_vc_rhs(int d_vc, int n) {
    if (d_vc < 1) throw std::invalid_argument("b_vc_rhs: VC dimension must be >= 1");
    if (n <= d_vc + 1)
        throw std::invalid_argument("b_vc_rhs: requires n > d_vc + 1, got n = " +
                                    std::to_string(n));
    double dn = static_cast<double>(d_vc);
    return std::sqrt(2.0 * dn * std::log(std::exp(1.0) * n / dn) / n);
}

BoundReport b_rerm_lipschitz(double lambda, double L, std::span<const double> hyp_cmi) {
    if (lambda <= 0)
        return not_applicable("b_rerm_lipschitz", "cor-F.1", "requires lambda > 0");
    BoundReport r;
    r.bound_id = "b_rerm_lipschitz";
    r.theorem_id = "cor-F.1";
    int n = static_cast<int>(hyp_cmi.size());
    double beta2 = 2.0 * L * L / (lambda * n);
    r.value = beta2 * (mean(hyp_cmi) + bernstein_h(1.0));
    r.components["beta2"] = beta2;
    return r;
}

BoundReport b_rerm_smooth(double lambda, double rho, double emp_risk, bool loss_nonneg,
                          std::span<const double> hyp_cmi) {
    int n = static_cast<int>(hyp_cmi.size());
    if (!loss_nonneg)
        return not_applicable("b_rerm_smooth", "cor-F.2", "requires a nonnegative loss");
    if (rho < 0 || lambda < 2.0 * rho / n)
        return not_applicable("b_rerm_smooth", "cor-F.2",
                              "requires lambda >= 2 rho / n");
    BoundReport r;
    r.bound_id = "b_rerm_smooth";
    r.theorem_id = "cor-F.2";
    double beta2 = 48.0 * rho * emp_risk / (lambda * n);
    r.value = beta2 * (mean(hyp_cmi) + bernstein_h(1.0));
    r.components["beta2"] = beta2;
    return r;
}

double birthday_floor(int n, int d) {
    if (n < 1) throw std::invalid_argument("birthday_floor: n must be >= 1");
    if (d <= 2 * n - 1) return 0.0;
    double base = 1.0 - static_cast<double>(2 * n - 1) / d;
    return std::pow(base, 2 * n - 1);
}

}  // namespace genbound
