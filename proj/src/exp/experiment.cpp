#include "exp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "algorithms/algorithms.hpp"
#include "json.hpp"

namespace genbound {

using nlohmann::json;

namespace {

const std::set<std::string>& known_examples() {
    static const std::set<std::string> e = {"onehot-gd", "sign-erm", "sign-erm-scaled",
                                            "regularized-erm", "threshold-erm"};
    return e;
}

template <typename T>
T get_or(const json& j, const char* field, T fallback) {
    if (!j.contains(field)) return fallback;
    try {
        return j.at(field).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + field + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    ExperimentConfig cfg;
    if (!j.contains("example")) throw ConfigError("config field 'example' is required");
    cfg.example = get_or<std::string>(j, "example", "");
    if (!known_examples().count(cfg.example))
        throw ConfigError("config field 'example': unknown example '" + cfg.example + "'");

    if (!j.contains("n_list")) throw ConfigError("config field 'n_list' is required");
    cfg.n_list = get_or<std::vector<int>>(j, "n_list", {});
    if (cfg.n_list.empty()) throw ConfigError("config field 'n_list' must be nonempty");
    for (int n : cfg.n_list)
        if (n < 1) throw ConfigError("config field 'n_list': n must be >= 1");

    cfg.mode = get_or<std::string>(j, "mode", "exact");
    if (cfg.mode != "exact" && cfg.mode != "mc")
        throw ConfigError("config field 'mode' must be 'exact' or 'mc'");
    cfg.mc_samples = get_or<long>(j, "mc_samples", 100000);
    if (cfg.mode == "mc" && cfg.mc_samples < 100)
        throw ConfigError("config field 'mc_samples' must be >= 100 in mc mode");
    cfg.seed = get_or<uint64_t>(j, "seed", 1);
    cfg.budget = get_or<uint64_t>(j, "budget", kDefaultBudget);
    if (cfg.budget < 1) throw ConfigError("config field 'budget' must be >= 1");
    cfg.mc_fallback = get_or<bool>(j, "mc_fallback", false);
    cfg.quantities = get_or<std::vector<std::string>>(j, "quantities", {});
    cfg.bounds = get_or<std::vector<std::string>>(j, "bounds", {});
    cfg.out = get_or<std::string>(j, "out", "");

    for (const auto& q : cfg.quantities)
        if (std::find(quantity_catalog().begin(), quantity_catalog().end(), q) ==
            quantity_catalog().end())
            throw ConfigError("config field 'quantities': unknown quantity '" + q + "'");
    for (const auto& b : cfg.bounds)
        if (std::find(bound_catalog().begin(), bound_catalog().end(), b) ==
            bound_catalog().end())
            throw ConfigError("config field 'bounds': unknown bound '" + b + "'");

    if (j.contains("params")) {
        const json& p = j.at("params");
        if (!p.is_object()) throw ConfigError("config field 'params' must be an object");
        cfg.L = get_or<double>(p, "L", 1.0);
        cfg.R0 = get_or<double>(p, "R0", 1.0);
        cfg.lambda = get_or<double>(p, "lambda", 1.0);
        cfg.eta = get_or<double>(p, "eta", -1.0);
        cfg.T = get_or<int>(p, "T", -1);
        cfg.d = get_or<int>(p, "d", -1);
        cfg.grid_size = get_or<int>(p, "grid_size", 6);
        cfg.true_threshold = get_or<int>(p, "true_threshold", 3);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ExampleSetup make_example(const ExperimentConfig& cfg, int n) {
    ExampleSetup s;
    s.example = cfg.example;
    s.n = n;
    s.L = cfg.L;
    s.lambda = cfg.lambda;
    if (cfg.example == "onehot-gd") {
        OneHotGDConfig gd = OneHotGDConfig::defaults(n, cfg.d);
        if (cfg.eta > 0) gd.eta = cfg.eta;
        if (cfg.T >= 0) gd.T = cfg.T;
        s.problem = make_onehot_gd_problem(n, gd.d, gd.eta, gd.T);
        s.d = gd.d;
        s.eta = gd.eta;
        s.T = gd.T;
    } else if (cfg.example == "sign-erm") {
        s.problem = make_sign_erm_problem(cfg.L, cfg.R0);
        s.R0 = cfg.R0;
    } else if (cfg.example == "sign-erm-scaled") {
        s.problem = make_sign_erm_scaled_problem(n, cfg.L);
        s.R0 = 1.0 / std::sqrt(static_cast<double>(n));
    } else if (cfg.example == "regularized-erm") {
        s.problem = make_regularized_erm_problem(cfg.lambda, cfg.L);
    } else if (cfg.example == "threshold-erm") {
        s.problem = make_threshold_erm_problem(cfg.grid_size, cfg.true_threshold);
        s.grid_size = cfg.grid_size;
        s.vc_dim = 1;
    } else {
        throw ConfigError("unknown example '" + cfg.example + "'");
    }
    return s;
}

const std::vector<std::string>& quantity_catalog() {
    static const std::vector<std::string> c = {
        "gen_error_standard", "gen_error_masked_data", "gen_error_masked_hyp",
        "second_moment", "beta1", "beta2", "gamma1", "gamma2", "gamma3", "gamma4",
        "delta1_mean", "delta1_sq_mean", "delta2_sq_mean", "lambda_max",
        "iomi_individual", "iomi_conditional", "iomi_full", "hyp_cmi", "ss_cmi",
        "std_cmi", "ld_mi", "ld_cmi", "e_cmi", "f_cmi", "vec_cmi"};
    return c;
}

const std::vector<std::string>& bound_catalog() {
    static const std::vector<std::string> c = {
        "b_iomi_sch_a", "b_iomi_sch_a_cond", "b_iomi_uniform", "b_iomi_uniform_jensen",
        "b_iomi_disintegrated", "b_iomi_fast", "b_cmi_delta1", "b_cmi_sch_c",
        "b_cmi_uniform", "b_cmi_fast_delta1", "b_cmi_fast_beta2", "b_ss_cmi_delta2",
        "b_ld", "b_second_moment", "b_second_moment_strong", "b_bernstein",
        "b_rerm_lipschitz", "b_vc_rhs", "baseline_iomi_const", "birthday_floor"};
    return c;
}

BoundReport evaluate_bound(Workbench& wb, const std::string& id) {
    const ExampleSetup& s = wb.setup();
    auto abs_gen = [&]() { return std::fabs(wb.risk().gen_standard); };

    if (id == "b_iomi_sch_a") {
        auto r = b_iomi_sch_a(wb.stability().gamma1, wb.per_row_values(Quantity::IomiIndividual));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_iomi_sch_a_cond") {
        auto r = b_iomi_sch_a_cond(wb.stability().gamma1,
                                   wb.per_row_values(Quantity::IomiConditional));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_iomi_uniform") {
        auto r = b_iomi_uniform(wb.stability().beta2, wb.per_row_values(Quantity::IomiIndividual));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_iomi_uniform_jensen") {
        auto r = b_iomi_uniform_jensen(wb.stability().beta2,
                                       wb.quantity(Quantity::IomiFull, 0).value, wb.n());
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_iomi_disintegrated") {
        auto dis = wb.seed_disintegrations();
        auto r = b_iomi_disintegrated(wb.stability().beta2, dis);
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_iomi_fast") {
        auto r = b_iomi_fast(wb.stability().gamma1, wb.stability().gamma2,
                             wb.per_row_values(Quantity::IomiIndividual));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "baseline_iomi_const") {
        auto r = baseline_iomi_const(1.0, wb.per_row_values(Quantity::IomiIndividual));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_cmi_delta1") {
        auto rows = wb.hyp_cmi_rows();
        auto r = b_cmi_delta1(rows);
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_cmi_sch_c") {
        auto rows = wb.hyp_cmi_rows();
        auto r = b_cmi_sch_c(wb.stability().gamma3, rows);
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_cmi_uniform") {
        auto r = b_cmi_uniform(wb.stability().beta2, wb.per_row_values(Quantity::HypCmi));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_cmi_fast_delta1") {
        auto rows = wb.hyp_cmi_rows();
        auto r = b_cmi_fast_delta1(rows);
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_cmi_fast_beta2") {
        auto r = b_cmi_fast_beta2(wb.stability().beta2, wb.stability().gamma4,
                                  wb.per_row_values(Quantity::HypCmi));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_ss_cmi_delta2") {
        auto rows = wb.ss_cmi_rows();
        auto r = b_ss_cmi_delta2(rows);
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_ld") {
        auto rows = wb.ld_rows();
        auto r = b_ld(wb.stability().beta2, rows);
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_second_moment") {
        double scale = wb.renorm().scale;
        auto [vec, _] = wb.vec_cmi_by_matrix();
        auto r = b_second_moment(wb.stability().beta2 / scale, vec, wb.n(),
                                 wb.problem().alg.symmetric);
        r.comparison = wb.second_moment() / (scale * scale);
        return r;
    }
    if (id == "b_second_moment_strong") {
        double scale = wb.renorm().scale;
        auto [vec, by_matrix] = wb.vec_cmi_by_matrix();
        (void)vec;
        auto r = b_second_moment_strong(by_matrix, wb.stability().gamma2 / scale, wb.n(),
                                        wb.problem().alg.symmetric);
        r.comparison = wb.second_moment() / (scale * scale);
        return r;
    }
    if (id == "b_bernstein") {
        auto r = b_bernstein(wb.bernstein_fit(), 1.0,
                             wb.per_row_values(Quantity::IomiIndividual));
        r.comparison = abs_gen() / wb.renorm().scale;
        return r;
    }
    if (id == "b_rerm_lipschitz") {
        if (s.example != "regularized-erm") {
            BoundReport r;
            r.bound_id = id;
            r.theorem_id = "cor-F.1";
            r.applicable = false;
            r.reason = "only defined for the regularized-erm example";
            return r;
        }
        auto r = b_rerm_lipschitz(s.lambda, s.L, wb.per_row_values(Quantity::HypCmi));
        r.comparison = abs_gen();
        return r;
    }
    if (id == "b_vc_rhs") {
        BoundReport r;
        r.bound_id = id;
        r.theorem_id = "thm-6.5";
        if (s.vc_dim < 1) {
            r.applicable = false;
            r.reason = "problem has no functional hypothesis class";
            return r;
        }
        if (wb.n() <= s.vc_dim + 1) {
            r.applicable = false;
            r.reason = "requires n > vc_dim + 1";
            return r;
        }
        r.value = b_vc_rhs(s.vc_dim, wb.n());
        KahanSum lhs;
        for (double v : wb.per_row_values(Quantity::FCmi)) lhs.add(std::sqrt(std::max(0.0, v)));
        r.comparison = lhs.value() / wb.n();
        r.components["fcmi_lhs"] = r.comparison;
        return r;
    }
    if (id == "birthday_floor") {
        BoundReport r;
        r.bound_id = id;
        r.theorem_id = "appendix-F";
        if (s.d < 1) {
            r.applicable = false;
            r.reason = "only defined for the one-hot example";
            return r;
        }
        r.value = birthday_floor(wb.n(), s.d);
        return r;
    }
    throw ConfigError("unknown bound id '" + id + "'");
}

namespace {

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

struct RowBuilder {
    std::vector<ReportRow>& rows;
    std::string example;
    int n;
    std::optional<double> exact_gen;

    ReportRow& push(const std::string& quantity, const std::string& index) {
        ReportRow row;
        row.example = example;
        row.n = n;
        row.index = index;
        row.quantity = quantity;
        row.exact_gen = exact_gen;
        rows.push_back(std::move(row));
        return rows.back();
    }
    void value_row(const std::string& quantity, const std::string& index, double v,
                   const std::string& method) {
        ReportRow& r = push(quantity, index);
        r.value = v;
        r.method = method;
    }
    void skip_row(const std::string& quantity, const std::string& reason) {
        ReportRow& r = push(quantity, "joint");
        r.applicable = false;
        r.reason = reason;
    }
};

bool selected(const std::vector<std::string>& wanted, const std::string& id) {
    return wanted.empty() || std::find(wanted.begin(), wanted.end(), id) != wanted.end();
}

void emit_quantity_rows_mc(Workbench& wb, const ExperimentConfig& cfg, RowBuilder& out,
                           const std::string& id, uint64_t seed);

void emit_quantity_rows(Workbench& wb, const ExperimentConfig& cfg, RowBuilder& out,
                        const std::string& id, uint64_t seed) {
    const bool explicit_request = !cfg.quantities.empty();
    auto guarded = [&](const std::function<void()>& body) {
        try {
            body();
        } catch (const BudgetError& e) {
            if (cfg.mc_fallback) {
                emit_quantity_rows_mc(wb, cfg, out, id, seed);
            } else if (explicit_request) {
                throw;
            } else {
                out.skip_row(id, std::string("budget-exceeded: needs ") +
                                     std::to_string(e.required) + " outcomes");
            }
        } catch (const NotApplicableError& e) {
            out.skip_row(id, e.what());
        }
    };

    if (id == "gen_error_standard")
        return guarded([&] { out.value_row(id, "joint", wb.risk().gen_standard, "exact"); });
    if (id == "gen_error_masked_data")
        return guarded([&] { out.value_row(id, "joint", wb.risk().gen_masked_data, "exact"); });
    if (id == "gen_error_masked_hyp")
        return guarded([&] { out.value_row(id, "joint", wb.risk().gen_masked_hyp, "exact"); });
    if (id == "second_moment")
        return guarded([&] { out.value_row(id, "joint", wb.second_moment(), "exact"); });
    if (id == "beta1")
        return guarded([&] { out.value_row(id, "joint", wb.stability().beta1, "exact"); });
    if (id == "beta2")
        return guarded([&] { out.value_row(id, "joint", wb.stability().beta2, "exact"); });
    if (id == "gamma1")
        return guarded([&] { out.value_row(id, "joint", wb.stability().gamma1, "exact"); });
    if (id == "gamma2")
        return guarded([&] { out.value_row(id, "joint", wb.stability().gamma2, "exact"); });
    if (id == "gamma3")
        return guarded([&] { out.value_row(id, "joint", wb.stability().gamma3, "exact"); });
    if (id == "gamma4")
        return guarded([&] { out.value_row(id, "joint", wb.stability().gamma4, "exact"); });

    auto delta_mean = [&](const std::function<double(const DeltaInfo&)>& f, bool maximum) {
        KahanSum acc;
        double mx = 0.0;
        for (int i = 0; i < wb.n(); ++i) {
            double v = f(wb.deltas(i));
            acc.add(v);
            mx = std::max(mx, v);
        }
        return maximum ? mx : acc.value() / wb.n();
    };
    if (id == "delta1_mean")
        return guarded([&] {
            out.value_row(id, "joint",
                          delta_mean([](const DeltaInfo& d) { return d.e_delta1; }, false),
                          "exact");
        });
    if (id == "delta1_sq_mean")
        return guarded([&] {
            out.value_row(id, "joint",
                          delta_mean([](const DeltaInfo& d) { return d.e_delta1_sq; }, false),
                          "exact");
        });
    if (id == "delta2_sq_mean")
        return guarded([&] {
            out.value_row(id, "joint",
                          delta_mean([](const DeltaInfo& d) { return d.e_delta2_sq; }, false),
                          "exact");
        });
    if (id == "lambda_max")
        return guarded([&] {
            out.value_row(id, "joint",
                          delta_mean([](const DeltaInfo& d) { return d.lambda_max; }, true),
                          "exact");
        });

    // information quantities
    Quantity q;
    try {
        q = quantity_from_name(id);
    } catch (const ConfigError&) {
        throw ConfigError("unknown quantity id '" + id + "'");
    }
    guarded([&] {
        if (!quantity_is_per_row(q)) {
            InfoEstimate est = wb.quantity(q, 0);
            out.value_row(id, "joint", est.value, est.method);
            return;
        }
        KahanSum mean;
        for (int i = 0; i < wb.n(); ++i) {
            InfoEstimate est = wb.quantity(q, i);
            out.value_row(id, std::to_string(i + 1), est.value, est.method);
            mean.add(est.value);
        }
        out.value_row(id, "joint", mean.value() / wb.n(), "exact");
    });
}

void emit_quantity_rows_mc(Workbench& wb, const ExperimentConfig& cfg, RowBuilder& out,
                           const std::string& id, uint64_t seed) {
    if (id == "gen_error_standard" || id == "gen_error_masked_data" ||
        id == "gen_error_masked_hyp") {
        RiskReport rep = gen_error_mc(wb.problem(), wb.n(), cfg.mc_samples, seed);
        ReportRow& r = out.push(id, "joint");
        r.method = "mc(samples=" + std::to_string(rep.samples) + ")";
        if (id == "gen_error_standard") {
            r.value = rep.gen_standard;
            r.stderr_ = rep.stderr_;
        } else if (id == "gen_error_masked_data") {
            r.value = rep.gen_masked_data;
        } else {
            r.value = rep.gen_masked_hyp;
        }
        return;
    }
    if (id == "beta2") {
        double v = beta_mc(wb.problem(), wb.n(), cfg.mc_samples, seed);
        ReportRow& r = out.push(id, "joint");
        r.value = v;
        r.method = "mc-lower-bound(samples=" + std::to_string(cfg.mc_samples) + ")";
        return;
    }
    bool is_info = true;
    Quantity q{};
    try {
        q = quantity_from_name(id);
    } catch (const ConfigError&) {
        is_info = false;
    }
    if (!is_info) {
        out.skip_row(id, "exact-only quantity; run in exact mode");
        return;
    }
    try {
        InfoEstimate est = wb.ctx().plugin_estimate(q, 0, cfg.mc_samples, seed);
        ReportRow& r = out.push(id, quantity_is_per_row(q) ? "1" : "joint");
        r.value = est.value;
        r.method = est.method;
        r.stderr_ = est.stderr_;
    } catch (const NotApplicableError& e) {
        out.skip_row(id, e.what());
    }
}

}  // namespace

std::vector<ReportRow> run_rows(const ExperimentConfig& cfg) {
    std::vector<ReportRow> rows;
    for (int n : cfg.n_list) {
        Workbench wb(make_example(cfg, n), cfg.budget);
        RowBuilder out{rows, cfg.example, n, std::nullopt};
        if (cfg.mode == "exact") {
            try {
                out.exact_gen = wb.risk().gen_standard;
            } catch (const BudgetError&) {
                out.exact_gen = std::nullopt;
            }
        }
        uint64_t derived_seed = cfg.seed * 1000003ULL + static_cast<uint64_t>(n);
        for (const auto& id : quantity_catalog()) {
            if (!selected(cfg.quantities, id)) continue;
            if (cfg.mode == "exact")
                emit_quantity_rows(wb, cfg, out, id, derived_seed);
            else
                emit_quantity_rows_mc(wb, cfg, out, id, derived_seed);
        }
        for (const auto& id : bound_catalog()) {
            if (!selected(cfg.bounds, id)) continue;
            if (cfg.mode != "exact") {
                // MC stability values are lower bounds of suprema and are
                // never substituted into bounds that need true suprema
                out.skip_row(id, "bounds need exact-mode inputs");
                continue;
            }
            try {
                BoundReport br = evaluate_bound(wb, id);
                ReportRow& r = out.push(id, "joint");
                r.method = br.theorem_id;
                if (br.applicable) {
                    r.value = br.value;
                } else {
                    r.applicable = false;
                    r.reason = br.reason;
                }
            } catch (const BudgetError& e) {
                if (!cfg.bounds.empty()) throw;
                out.skip_row(id, std::string("budget-exceeded: needs ") +
                                     std::to_string(e.required) + " outcomes");
            } catch (const NotApplicableError& e) {
                out.skip_row(id, e.what());
            }
        }
    }
    return rows;
}

std::optional<double> loglog_slope(std::span<const double> ns,
                                   std::span<const double> values) {
    std::vector<double> xs, ys;
    for (size_t k = 0; k < ns.size(); ++k) {
        if (values[k] > 0.0 && ns[k] > 0.0) {
            xs.push_back(std::log(ns[k]));
            ys.push_back(std::log(values[k]));
        }
    }
    if (xs.size() < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        num += (xs[k] - mx) * (ys[k] - my);
        den += (xs[k] - mx) * (xs[k] - mx);
    }
    if (den == 0.0) return std::nullopt;
    return num / den;
}

std::vector<ReportRow> sweep_rows(const ExperimentConfig& cfg) {
    if (cfg.n_list.size() < 2)
        throw ConfigError("sweep requires at least two values in n_list");
    std::vector<ReportRow> rows = run_rows(cfg);

    std::vector<std::string> ids = quantity_catalog();
    ids.insert(ids.end(), bound_catalog().begin(), bound_catalog().end());
    for (const auto& id : ids) {
        std::vector<double> ns, vals;
        for (const ReportRow& r : rows) {
            if (r.quantity != id || r.index != "joint" || !r.applicable || !r.value)
                continue;
            ns.push_back(static_cast<double>(r.n));
            vals.push_back(*r.value);
        }
        if (ns.size() < 2) continue;
        ReportRow slope;
        slope.example = cfg.example;
        slope.n = 0;
        slope.index = "slope";
        slope.quantity = id;
        slope.method = "loglog-fit";
        auto s = loglog_slope(ns, vals);
        if (s) {
            slope.value = *s;
        } else {
            slope.applicable = false;
            slope.reason = "fewer than two positive points";
        }
        rows.push_back(std::move(slope));
    }
    return rows;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::string csv = "example,n,index,quantity,value,method,stderr,applicable,exact_gen_error\n";
    for (const ReportRow& r : rows) {
        csv += sanitize(r.example);
        csv += ',';
        csv += std::to_string(r.n);
        csv += ',';
        csv += sanitize(r.index);
        csv += ',';
        csv += sanitize(r.quantity);
        csv += ',';
        if (r.value) csv += fmt_g12(*r.value);
        csv += ',';
        csv += sanitize(r.method);
        csv += ',';
        if (r.stderr_) csv += fmt_g12(*r.stderr_);
        csv += ',';
        csv += r.applicable ? "yes" : "no:" + sanitize(r.reason);
        csv += ',';
        if (r.exact_gen) csv += fmt_g12(*r.exact_gen);
        csv += '\n';
    }
    return csv;
}

// ---------------------------------------------------------------------------
// invariant verification

namespace {

constexpr double kEqTol = 1e-10;
constexpr double kOrderTol = 1e-12;
constexpr double kSandwichTol = 1e-9;

struct Verifier {
    std::vector<CheckResult>& checks;
    int n;

    void report(const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, "n=" + std::to_string(n) + ": " + detail});
    }
    void le(const std::string& name, double lhs, double rhs, double tol) {
        report(name, lhs <= rhs + tol,
               fmt_g12(lhs) + " <= " + fmt_g12(rhs) + " + " + fmt_g12(tol));
    }
    void close(const std::string& name, double a, double b, double tol) {
        report(name, std::fabs(a - b) <= tol,
               fmt_g12(a) + " vs " + fmt_g12(b) + " (tol " + fmt_g12(tol) + ")");
    }
};

}  // namespace

std::vector<CheckResult> verify_suite(const ExperimentConfig& cfg) {
    if (cfg.mode != "exact")
        throw ConfigError("verify requires exact mode");
    std::vector<CheckResult> checks;
    for (int n : cfg.n_list) {
        Workbench wb(make_example(cfg, n), cfg.budget);
        Verifier v{checks, n};

        // exact mass normalization of the enumeration backbone
        {
            KahanSum total;
            enumerate_tuples(wb.problem().dist, std::min(n, 3), cfg.budget, "verify",
                             [&](std::span<const int>, double m) { total.add(m); });
            v.close("mass-normalization", total.value(), 1.0, kMassTol);
        }

        const RiskReport& risk = wb.risk();
        v.close("lemma-a1-agreement", risk.gen_standard, risk.gen_masked_data, kEqTol);
        v.close("lemma-a1-agreement", risk.gen_standard, risk.gen_masked_hyp, kEqTol);
        v.close("gen-error-definition", risk.gen_standard,
                risk.expected_population - risk.expected_empirical, kEqTol);

        const GenErrorRows& rows = wb.gen_rows();
        for (int i = 0; i < n; ++i)
            v.close("flip-symmetry", rows.standard[static_cast<size_t>(i)],
                    rows.flipped[static_cast<size_t>(i)], kEqTol);

        auto iomi = wb.per_row_values(Quantity::IomiIndividual);
        auto iomi_cond = wb.per_row_values(Quantity::IomiConditional);
        auto hyp = wb.per_row_values(Quantity::HypCmi);
        auto ss = wb.per_row_values(Quantity::SsCmi);
        auto ld_mi = wb.per_row_values(Quantity::LdMi);
        auto ld = wb.per_row_values(Quantity::LdCmi);
        auto ecmi = wb.per_row_values(Quantity::ECmi);
        std::vector<double> fcmi;
        if (wb.problem().predict) fcmi = wb.per_row_values(Quantity::FCmi);

        const double ln2 = std::log(2.0);
        for (int i = 0; i < n; ++i) {
            size_t si = static_cast<size_t>(i);
            v.le("iomi-chain", iomi[si], iomi_cond[si], kEqTol);
            v.le("thm42-hyp-cmi-le-iomi", hyp[si], iomi[si], kEqTol);
            v.close("sec4-equality", hyp[si], ss[si], kEqTol);
            v.le("sec6-chain", ld_mi[si], ld[si], kEqTol);
            v.le("sec6-chain", ld[si], ecmi[si], kEqTol);
            if (!fcmi.empty()) {
                v.le("sec6-chain", ecmi[si], fcmi[si], kEqTol);
                v.le("sec6-chain", fcmi[si], ss[si], kEqTol);
            } else {
                v.le("sec6-chain", ecmi[si], ss[si], kEqTol);
            }
            v.le("cmi-cap-log2", hyp[si], ln2, kOrderTol);
            v.le("cmi-cap-log2", ss[si], ln2, kOrderTol);
            v.le("cmi-cap-log2", ld[si], ln2, kOrderTol);
            v.le("cmi-cap-log2", ecmi[si], ln2, kOrderTol);
        }
        try {
            auto std_cmi = wb.per_row_values(Quantity::StdCmi);
            for (double x : std_cmi) v.le("cmi-cap-log2", x, ln2, kOrderTol);
        } catch (const BudgetError&) {
            v.report("cmi-cap-log2", true, "std_cmi skipped: over budget");
        }

        const StabilityReport& st = wb.stability();
        v.le("stability-order", st.gamma2, st.gamma1, kOrderTol);
        v.le("stability-order", st.gamma1, st.beta2, kOrderTol);
        v.le("stability-order", st.gamma2, st.beta2, kOrderTol);
        v.le("stability-order", st.gamma3, st.beta2, kOrderTol);
        v.le("stability-order", st.gamma4, st.beta2, kOrderTol);
        double e_delta1_mean = 0.0, lambda_max = 0.0, delta2_max = 0.0;
        for (int i = 0; i < n; ++i) {
            const DeltaInfo& dt = wb.deltas(i);
            e_delta1_mean += dt.e_delta1 / n;
            lambda_max = std::max(lambda_max, dt.lambda_max);
            delta2_max = std::max(delta2_max, dt.delta2_max);
        }
        v.le("stability-order", e_delta1_mean, st.beta2, kOrderTol);
        v.le("stability-order", delta2_max, st.beta2, kOrderTol);
        v.le("lambda-cap", lambda_max, 1.0, kOrderTol);

        for (const auto& id : bound_catalog()) {
            try {
                BoundReport br = evaluate_bound(wb, id);
                if (!br.applicable) continue;
                if (id == "birthday_floor") continue;
                if (id == "b_second_moment" || id == "b_second_moment_strong")
                    v.le("moment-sandwich[" + id + "]", br.comparison, br.value, kSandwichTol);
                else
                    v.le("soundness-sandwich[" + id + "]", br.comparison, br.value,
                         kSandwichTol);
                if (id == "b_cmi_uniform")
                    v.le("cor52-ceiling", br.value,
                         std::sqrt(2.0 * ln2) * wb.stability().beta2, kOrderTol);
                if (id == "b_cmi_fast_delta1")
                    v.le("eq8-ceiling", br.value, (ln2 + bernstein_h(1.0)) * e_delta1_mean,
                         kOrderTol);
            } catch (const BudgetError&) {
                v.report("soundness-sandwich[" + id + "]", true, "skipped: over budget");
            } catch (const NotApplicableError&) {
            }
        }

        if (wb.problem().predict && n > wb.setup().vc_dim + 1) {
            try {
                KahanSum sum;
                for (double x : fcmi) sum.add(x);
                double full = wb.fvec_cmi();
                double dvc = static_cast<double>(wb.setup().vc_dim);
                v.le("sauer-chain", sum.value(), full, kEqTol);
                v.le("sauer-chain", full, 2.0 * dvc * std::log(std::exp(1.0) * n / dvc),
                     kOrderTol);
            } catch (const BudgetError&) {
                v.report("sauer-chain", true, "skipped: over budget");
            }
        }
    }
    return checks;
}

std::string verify_report(const std::vector<CheckResult>& checks) {
    std::string out;
    size_t failed = 0;
    for (const auto& c : checks) {
        out += c.pass ? "PASS  " : "FAIL  ";
        out += c.name;
        out += "  (";
        out += c.detail;
        out += ")\n";
        if (!c.pass) ++failed;
    }
    out += "verified " + std::to_string(checks.size()) + " checks, " +
           std::to_string(failed) + " failed\n";
    return out;
}

bool verify_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace genbound
