#ifndef GENBOUND_EXP_WORKBENCH_HPP
#define GENBOUND_EXP_WORKBENCH_HPP

// Per-(example, n) computation cache: exact risk, stability, delta tables,
// information quantities and the joined inputs the bound evaluators take.
// Per-row quantities of symmetric algorithms are computed once and
// replicated, since the row laws coincide.

#include <map>
#include <memory>
#include <optional>

#include "bounds/bounds.hpp"
#include "core/generror.hpp"
#include "info/protocol.hpp"
#include "stability/stability.hpp"

namespace genbound {

struct ExampleSetup {
    Problem problem;
    std::string example;
    int n = 0;
    // constants the bound evaluators need
    double L = 1.0, R0 = 1.0, lambda = 1.0;
    double eta = 0.0;
    int T = 0;
    int d = 0;          // one-hot ambient dimension (0 when not applicable)
    int grid_size = 0;  // threshold grid (0 when not applicable)
    int vc_dim = 0;     // 0 when the problem is not a classification family
};

class Workbench {
  public:
    Workbench(ExampleSetup setup, uint64_t budget);

    const ExampleSetup& setup() const { return setup_; }
    const Problem& problem() const { return setup_.problem; }
    int n() const { return setup_.n; }
    uint64_t budget() const { return budget_; }
    ProtocolContext& ctx() { return *ctx_; }

    const RiskReport& risk();
    const GenErrorRows& gen_rows();
    double second_moment();
    const StabilityReport& stability();
    const DeltaInfo& deltas(int i);
    const LossRenorm& renorm();

    InfoEstimate quantity(Quantity q, int i);
    std::vector<double> per_row_values(Quantity q);  // length n

    std::vector<HypCmiRow> hyp_cmi_rows();
    std::vector<SsCmiRow> ss_cmi_rows();
    std::vector<LdRow> ld_rows();
    // I(E;U|Wmat) joined with the per-row Delta_1 tables (renormalized units)
    std::pair<double, VecCmiByMatrix> vec_cmi_by_matrix();
    std::vector<SeedDisintegration> seed_disintegrations();

    std::vector<std::pair<int, double>> hypothesis_law();  // P(W+ = w)
    const BernsteinFit& bernstein_fit();

    // full-column Sauer-Shelah chain inputs (classification only)
    double fvec_cmi();

  private:
    ExampleSetup setup_;
    uint64_t budget_;
    std::unique_ptr<ProtocolContext> ctx_;

    std::optional<RiskReport> risk_;
    std::optional<GenErrorRows> gen_rows_;
    std::optional<double> second_moment_;
    std::optional<StabilityReport> stability_;
    std::map<int, DeltaInfo> deltas_;
    std::optional<LossRenorm> renorm_;
    std::map<std::pair<int, int>, InfoEstimate> quantities_;
    std::optional<BernsteinFit> bernstein_;

    int row_key(Quantity q, int i) const;
};

}  // namespace genbound

#endif
