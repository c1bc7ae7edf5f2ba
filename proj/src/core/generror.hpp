#ifndef GENBOUND_CORE_GENERROR_HPP
#define GENBOUND_CORE_GENERROR_HPP

// The three equivalent generalization-error evaluators, the per-row flip
// symmetry check, Monte Carlo estimation and the exact second moment.

#include <string>
#include <vector>

#include "core/model.hpp"

namespace genbound {

struct RiskReport {
    double expected_population = 0.0;   // L_mu
    double expected_empirical = 0.0;    // Lhat_n
    double gen_standard = 0.0;          // (1/n) sum_i E[l(W-,Z+) - l(W+,Z+)]
    double gen_masked_data = 0.0;       // mask-selects the evaluation instance
    double gen_masked_hyp = 0.0;        // mask-selects the hypothesis roles
    std::string method = "exact";
    long samples = 0;
    double stderr_ = 0.0;
};

struct GenErrorRows {
    std::vector<double> standard;   // per-row unflipped expectation
    std::vector<double> flipped;    // per-row expectation with +/- swapped
};

double population_risk(const Problem& p, const Hypothesis& h);
double empirical_risk(const Problem& p, const Hypothesis& h, std::span<const int> sample);

// Enumerates the exact law of (W+, Wi-, Zi+, Zi-) for one marked row and
// calls fn(w_plus_id, w_minus_id, z_plus, z_minus, mass). Symmetric
// algorithms enumerate the unmarked rows as a multiset.
void for_each_neighbor_outcome(
    const Problem& p, int n, int i, uint64_t budget, const char* what, Trainer& trainer,
    const std::function<void(int, int, int, int, double)>& fn);

RiskReport gen_error_exact(const Problem& p, int n, uint64_t budget);

// Per-row values for the flip-symmetry property.
GenErrorRows gen_error_rows(const Problem& p, int n, uint64_t budget);

RiskReport gen_error_mc(const Problem& p, int n, long samples, uint64_t seed);

// E[(L_mu(W) - L_S(W))^2] in the raw loss scale.
double second_moment_exact(const Problem& p, int n, uint64_t budget);

}  // namespace genbound

#endif
