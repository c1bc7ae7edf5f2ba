#ifndef GENBOUND_STABILITY_HPP
#define GENBOUND_STABILITY_HPP

// Uniform-stability and sample-conditioned-hypothesis stability parameters,
// computed exactly by enumeration or bounded from below by random search.

#include "core/generror.hpp"
#include "core/model.hpp"

namespace genbound {

struct StabilityReport {
    double beta1 = 0.0;   // weak uniform stability (sup of E_R |gap|)
    double beta2 = 0.0;   // strong uniform stability (sup sup_r |gap|)
    double gamma1 = 0.0;  // SCH-A: worst reachable hypothesis, worst z
    double gamma2 = 0.0;  // SCH-B: mean-square against an independent Z'
    double gamma3 = 0.0;  // SCH-C: expected conditional-support sup
    double gamma4 = 0.0;  // SCH-D: mean-square at the replaced training point
    std::string method = "exact";
    int n = 0;
    // Def. 2.3 remark expectations, recorded but never asserted
    bool observed_gamma4_le_gamma3 = false;
    bool observed_gamma2_le_gamma4 = false;
};

// Realized stability tables for one marked row, hypothesis ids interned in
// the caller's registry.
struct DeltaInfo {
    struct PairRow {
        int w_plus = -1;
        int w_minus = -1;
        double prob = 0.0;       // P(Wpair_i = (w+, w-))
        double delta1 = 0.0;     // sup over the Zhat_i conditional support
        double gap_sq_mean = 0.0;  // E[(l(w-,Zhat)-l(w+,Zhat))^2 | pair]
        double lambda = 0.0;     // gap_sq_mean / delta1^2, 0/0 -> 0
    };
    std::vector<PairRow> pairs;
    double e_delta1 = 0.0;
    double e_delta1_sq = 0.0;
    double lambda_max = 0.0;
    // per support instance: sup over realized hypothesis pairs given Z+_i = z
    std::vector<double> delta2;
    double e_delta2_sq = 0.0;
    double delta2_max = 0.0;
};

StabilityReport stability_exact(const Problem& p, int n, uint64_t budget);

DeltaInfo delta_tables(const Problem& p, int n, int i, uint64_t budget, Trainer& trainer);

// Random search over (s, i, z'_i, z, r); a lower bound on beta2.
double beta_mc(const Problem& p, int n, long samples, uint64_t seed);

}  // namespace genbound

#endif
