#ifndef GENBOUND_BOUNDS_HPP
#define GENBOUND_BOUNDS_HPP

// Closed-form evaluators for the generalization bounds, as pure arithmetic
// over precomputed stability and information quantities. Every evaluator
// gates on its theorem's preconditions and reports an inapplicable flag
// instead of a number when they fail.

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace genbound {

struct BoundReport {
    std::string bound_id;
    std::string theorem_id;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> components;
    bool applicable = true;
    std::string reason;  // why not, when inapplicable
    // exact |gen error| (or second moment, for moment bounds) in the same
    // loss scale as the bound, filled by the caller
    double comparison = std::numeric_limits<double>::quiet_NaN();
};

// Bernstein function (e^x - x - 1)/x^2; series evaluation below 1e-4.
double bernstein_h(double x);

// Affine map l -> (l + shift)/scale into [0,1], derived from declared_range.
struct LossRenorm {
    double shift = 0.0;
    double scale = 1.0;
};
LossRenorm renorm_to_unit(const LossFunction& loss);

// --- IOMI family -----------------------------------------------------------

BoundReport b_iomi_sch_a(double gamma1, std::span<const double> iomi);
BoundReport b_iomi_sch_a_cond(double gamma1, std::span<const double> iomi_cond);
BoundReport b_iomi_uniform(double beta2, std::span<const double> iomi);
BoundReport b_iomi_uniform_jensen(double beta2, double iomi_full, int n);

struct SeedDisintegration {
    std::vector<double> weight;  // P(R = r)
    std::vector<double> value;   // I^r(W+; Z+_i)
};
BoundReport b_iomi_disintegrated(double beta2, std::span<const SeedDisintegration> per_row);

BoundReport b_iomi_fast(double gamma1, double gamma2, std::span<const double> iomi);

// Classical individual-IOMI baseline with a constant proxy in place of the
// stability parameter.
BoundReport baseline_iomi_const(double sigma, std::span<const double> iomi);

// --- hypotheses-conditioned CMI family --------------------------------------

// Per-row join of the disintegrated hypotheses-conditioned CMI with the
// realized Delta_1 table.
struct HypCmiRow {
    double cmi = 0.0;      // I(Zhat_i; U_i | Wpair_i)
    double sup_dis = 0.0;  // sup over pairs of I^{pair}
    std::vector<double> weight;  // pair probabilities
    std::vector<double> dis;     // I^{pair}
    std::vector<double> delta1;  // realized Delta_1 per pair
    std::vector<double> lambda;  // realized Lambda per pair
    double e_delta1 = 0.0;
    double e_delta1_sq = 0.0;
};

BoundReport b_cmi_delta1(std::span<const HypCmiRow> rows);
BoundReport b_cmi_sch_c(double gamma3, std::span<const HypCmiRow> rows);
BoundReport b_cmi_uniform(double beta2, std::span<const double> hyp_cmi);
BoundReport b_cmi_fast_delta1(std::span<const HypCmiRow> rows);
BoundReport b_cmi_fast_beta2(double beta2, double gamma4, std::span<const double> hyp_cmi);

// --- supersample-conditioned CMI family --------------------------------------

struct SsCmiRow {
    double cmi = 0.0;            // I(W_i, Wbar_i; U_i | Z+_i)
    std::vector<double> weight;  // P(Z+_i = z)
    std::vector<double> dis;     // I^{z}
    std::vector<double> delta2;  // realized Delta_2 per z
    double e_delta2_sq = 0.0;
};
BoundReport b_ss_cmi_delta2(std::span<const SsCmiRow> rows);

struct LdRow {
    double mi = 0.0;   // I(dL_i; U_i)
    double cmi = 0.0;  // I(dL_i; U_i | Z+_i)
    std::vector<double> weight;  // P(Z+_i = z)
    std::vector<double> dis;     // I^{z}(dL_i; U_i)
};
// All three loss-difference forms; value is the tightest (the min form).
BoundReport b_ld(double beta2, std::span<const LdRow> rows);

// --- moment bounds -----------------------------------------------------------

// Requires the loss renormalized into [0,1] and a sample-symmetric algorithm;
// beta2 in renormalized units.
BoundReport b_second_moment(double beta2_unit, double vec_cmi, int n, bool symmetric);

struct VecCmiByMatrix {
    std::vector<double> weight;  // P(Wmat = w)
    std::vector<double> dis;     // I^{w}(E; U)
    std::vector<double> dbar1;   // (1/n) sum_i Delta_1(row_i)^2, renormalized units
};
BoundReport b_second_moment_strong(const VecCmiByMatrix& vc, double gamma2_unit, int n,
                                   bool symmetric);

// --- Bernstein condition ------------------------------------------------------

struct BernsteinFit {
    double B = 0.0;
    double kappa = 1.0;
    bool finite = true;        // false when no finite B satisfies the condition
    int w_star = -1;           // hypothesis id of the chosen risk minimizer
    double pop_at_star = 0.0;  // L_mu(w*), renormalized units
    double excess_mean_pow = 0.0;  // E_W[(L_mu(W) - L_mu(w*))^{1/kappa}]
    double expected_pop = 0.0;     // L_mu = E_W[L_mu(W)]
};

// Minimal B over the reachable hypothesis law (plus the analytic minimizer
// as a w* candidate); losses mapped through `rn`.
BernsteinFit fit_bernstein(const Problem& p,
                           std::span<const std::pair<int, double>> w_law,
                           Trainer& trainer, double kappa, const LossRenorm& rn);

// Derived SCH-B parameter gamma_2^2 = 4 B E[(L(W) - L(w*))^{1/kappa}].
double prop62_gamma2(const BernsteinFit& fit);

// kappa = 1 and loss in [0, C] required.
BoundReport b_bernstein(const BernsteinFit& fit, double C, std::span<const double> iomi);

// --- distribution-free / misc ---------------------------------------------------

// sqrt(2 d log(e n / d) / n); requires n > d_vc + 1.
double b_vc_rhs(int d_vc, int n);

BoundReport b_rerm_lipschitz(double lambda, double L, std::span<const double> hyp_cmi);
BoundReport b_rerm_smooth(double lambda, double rho, double emp_risk, bool loss_nonneg,
                          std::span<const double> hyp_cmi);

// (1 - (2n-1)/d)^(2n-1), or 0 when d <= 2n-1.
double birthday_floor(int n, int d);

}  // namespace genbound

#endif
