#ifndef GENBOUND_ALGORITHMS_HPP
#define GENBOUND_ALGORITHMS_HPP

// Concrete learning algorithms: projected GD on one-hot data, sign ERM on the
// two-point Rademacher problem (plus its scaled variant), Tikhonov-regularized
// ERM on a small discrete set, and threshold ERM on a labeled grid.

#include "core/model.hpp"

namespace genbound {

struct OneHotGDConfig {
    int d = 0;          // ambient dimension
    double eta = 0.0;   // learning rate
    int T = 0;          // iteration count
    int n = 0;          // sample size the defaults were derived from

    // d = 2n^2, eta = 1/(n sqrt n), T = n^2 unless overridden
    static OneHotGDConfig defaults(int n, int d_override = -1);
};

// Closed-form projected-GD endpoint on the unit ball for the linear loss
// -<w, mu_hat>, started from the origin.
Hypothesis gd_onehot_closed(const OneHotGDConfig& cfg, const DiscreteDistribution& dist,
                            std::span<const int> sample);

// Step-by-step projected gradient descent; the oracle for the closed form.
Hypothesis gd_onehot_iterative(const OneHotGDConfig& cfg, const DiscreteDistribution& dist,
                               std::span<const int> sample);

struct RademacherERMConfig {
    double R0 = 1.0;
    double L = 1.0;
    int tie_break = +1;  // hypothesis sign returned when the epsilons cancel
};

Hypothesis sign_erm(const RademacherERMConfig& cfg, const DiscreteDistribution& dist,
                    std::span<const int> sample);

struct RegularizedERMConfig {
    double lambda = 1.0;
    double L = 1.0;
};

// argmin_w -L<w, mu_hat> + lambda ||w||^2, i.e. w = L mu_hat / (2 lambda)
Hypothesis regularized_erm(const RegularizedERMConfig& cfg, const DiscreteDistribution& dist,
                           std::span<const int> sample);

struct ThresholdERMConfig {
    int grid_size = 6;       // x ranges over 1..grid_size
    int true_threshold = 3;  // labels are 1 iff x >= true_threshold
};

// Smallest threshold consistent with the sample; the all-negative sample
// degenerates to the grid_size+1 sentinel.
Hypothesis threshold_erm(const ThresholdERMConfig& cfg, const DiscreteDistribution& dist,
                         std::span<const int> sample);

// ---------------------------------------------------------------------------
// Ready-made problems (distribution + algorithm + loss bundles)

Problem make_onehot_gd_problem(int n, int d = -1, double eta = -1.0, int T = -1);
Problem make_sign_erm_problem(double L = 1.0, double R0 = 1.0);
// R0 = 1/d with d = sqrt(n)
Problem make_sign_erm_scaled_problem(int n, double L = 1.0);
Problem make_regularized_erm_problem(double lambda = 1.0, double L = 1.0);
Problem make_threshold_erm_problem(int grid_size = 6, int true_threshold = 3);

}  // namespace genbound

#endif
