#ifndef GENBOUND_EXP_EXPERIMENT_HPP
#define GENBOUND_EXP_EXPERIMENT_HPP

// Experiment driver: JSON config, per-configuration report rows, n-sweeps
// with log-log rate fits, the invariant verification suite and CSV emission.

#include <optional>

#include "exp/workbench.hpp"

namespace genbound {

struct ExperimentConfig {
    std::string example;
    std::vector<int> n_list;
    std::string mode = "exact";  // exact | mc
    long mc_samples = 100000;
    uint64_t seed = 1;
    uint64_t budget = kDefaultBudget;
    bool mc_fallback = false;  // over-budget exact quantities fall back to MC
    std::vector<std::string> quantities;  // empty selects the default catalog
    std::vector<std::string> bounds;      // empty selects the default catalog
    std::string out;

    // example parameters; negative means "use the paper default"
    double L = 1.0, R0 = 1.0, lambda = 1.0;
    double eta = -1.0;
    int T = -1;
    int d = -1;
    int grid_size = 6;
    int true_threshold = 3;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

ExampleSetup make_example(const ExperimentConfig& cfg, int n);

const std::vector<std::string>& quantity_catalog();
const std::vector<std::string>& bound_catalog();

struct ReportRow {
    std::string example;
    int n = 0;
    std::string index;  // "1".."n", "joint", or "slope"
    std::string quantity;
    std::optional<double> value;
    std::string method;
    std::optional<double> stderr_;
    bool applicable = true;
    std::string reason;
    std::optional<double> exact_gen;
};

BoundReport evaluate_bound(Workbench& wb, const std::string& id);

std::vector<ReportRow> run_rows(const ExperimentConfig& cfg);
// run rows for every n plus one log-log slope row per joint quantity
std::vector<ReportRow> sweep_rows(const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<ReportRow>& rows);

// least-squares slope of log(value) against log(n); nullopt when fewer than
// two positive points exist
std::optional<double> loglog_slope(std::span<const double> ns,
                                   std::span<const double> values);

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

std::vector<CheckResult> verify_suite(const ExperimentConfig& cfg);
std::string verify_report(const std::vector<CheckResult>& checks);
bool verify_passed(const std::vector<CheckResult>& checks);

}  // namespace genbound

#endif
