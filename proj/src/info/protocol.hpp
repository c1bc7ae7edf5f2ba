#ifndef GENBOUND_INFO_PROTOCOL_HPP
#define GENBOUND_INFO_PROTOCOL_HPP

// Materializes exact joint laws over protocol variables (supersample entries,
// mask bits, induced hypotheses, losses, predictions) and computes the named
// information quantities, exactly or by plug-in Monte Carlo. Each variable
// declares the primitive draws it depends on, so the enumeration cost is the
// product of only those cardinalities.

#include "core/generror.hpp"
#include "core/model.hpp"
#include "info/joint_table.hpp"

namespace genbound {

enum class Var {
    ZPlusI,     // supersample row i, plus column
    ZMinusI,    // row i, minus column
    ZRowI,      // the (plus, minus) pair of row i
    UI,         // mask bit of row i
    Seed,       // algorithm randomness
    WPlus,      // hypothesis trained on the plus column
    WMinusI,    // hypothesis trained after replacing row i
    WPairI,     // the row-i hypothesis pair (WPlus, WMinusI)
    ZHatI,      // mask-selected evaluation instance of row i
    WSelPairI,  // mask-ordered hypothesis pair (W_i, Wbar_i)
    DeltaLI,    // loss difference l(W_i, Z+_i) - l(Wbar_i, Z+_i)
    LossPairI,  // loss pair (L_i, Lbar_i) at Z+_i
    PredPairI,  // prediction pair (F_i, Fbar_i) at Z+_i
    WStd,       // hypothesis trained on the mask-selected sample
    ZPlusVec,   // the whole plus column (ordered)
    UVec,       // the whole mask
    EVec,       // the whole evaluation set
    WMat,       // the whole hypothesis matrix (WPlus, WMinus_1..n)
    FVecPair,   // predictions of the whole plus column by (W_j, Wbar_j)
};

const char* var_name(Var v);

enum class Quantity {
    IomiIndividual,  // I(W+; Z+_i)
    IomiConditional, // I(W+; Z+_i | W-_i)
    IomiFull,        // I(W+; Z+_[n]) = I(W; S)
    HypCmi,          // I(Zhat_i; U_i | Wpair_i)
    SsCmi,           // I(W_i, Wbar_i; U_i | Z+_i)
    StdCmi,          // I(W; U_i | Zrow_i), W trained on the selected column
    LdMi,            // I(dL_i; U_i)
    LdCmi,           // I(dL_i; U_i | Z+_i)
    ECmi,            // I(L_i, Lbar_i; U_i | Z+_i)
    FCmi,            // I(F_i, Fbar_i; U_i | Z+_i)
    VecCmi,          // I(E; U | Wmat)
};

const char* quantity_name(Quantity q);
Quantity quantity_from_name(const std::string& name);  // throws ConfigError
bool quantity_is_per_row(Quantity q);

class ProtocolContext {
  public:
    ProtocolContext(const Problem& p, int n, uint64_t budget);

    const Problem& problem() const { return *p_; }
    int n() const { return n_; }
    uint64_t budget() const { return budget_; }
    HypothesisRegistry& registry() { return reg_; }
    Trainer& trainer() { return trainer_; }
    ValueInterner& composites() { return composites_; }

    // Exact joint table over the requested variables for marked row i.
    JointTable build(int i, std::span<const Var> vars, const char* what);

    InfoEstimate quantity_exact(Quantity q, int i);
    // Disintegrated variant over the quantity's conditioning variable;
    // optionally hands back the underlying table.
    DisintegratedCmi quantity_disintegrated(Quantity q, int i, JointTable* table_out = nullptr);
    // Empirical-frequency plug-in with bootstrap standard error (200
    // resamples). Positive bias, documented; samples >= 100.
    InfoEstimate plugin_estimate(Quantity q, int i, long samples, uint64_t seed);

  private:
    const Problem* p_;
    int n_;
    uint64_t budget_;
    HypothesisRegistry reg_;
    Trainer trainer_;
    ValueInterner composites_;
};

}  // namespace genbound

#endif
