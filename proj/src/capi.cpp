#include "genbound/genbound.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "exp/experiment.hpp"

using namespace genbound;

struct gb_session {
    ExperimentConfig config;
    bool configured = false;
    std::string report;
    std::string error;
};

namespace {

int fail(gb_session* s, gb_status code, const std::string& msg) {
    if (s) s->error = msg;
    return code;
}

template <typename Fn>
int guarded(gb_session* s, Fn&& fn) {
    if (!s) return GB_ERROR;
    s->error.clear();
    try {
        return fn();
    } catch (const ConfigError& e) {
        return fail(s, GB_CONFIG_ERROR, e.what());
    } catch (const BudgetError& e) {
        return fail(s, GB_BUDGET_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail(s, GB_ERROR, e.what());
    }
}

int require_config(gb_session* s) {
    if (!s->configured)
        throw ConfigError("no configuration loaded; call gb_load_config first");
    return GB_OK;
}

int write_csv(gb_session* s, const std::string& csv) {
    if (s->config.out.empty()) throw ConfigError("no output path configured");
    std::ofstream f(s->config.out, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open output file '" + s->config.out + "'");
    f << csv;
    if (!f) return fail(s, GB_ERROR, "failed writing '" + s->config.out + "'");
    return GB_OK;
}

}  // namespace

extern "C" {

gb_session* gb_session_new(void) { return new (std::nothrow) gb_session; }

void gb_session_free(gb_session* s) { delete s; }

int gb_load_config(gb_session* s, const char* json_text) {
    return guarded(s, [&] {
        if (!json_text) throw ConfigError("config text is null");
        s->config = parse_config(json_text);
        s->configured = true;
        return GB_OK;
    });
}

int gb_load_config_file(gb_session* s, const char* path) {
    return guarded(s, [&] {
        if (!path) throw ConfigError("config path is null");
        s->config = parse_config_file(path);
        s->configured = true;
        return GB_OK;
    });
}

int gb_set_mode(gb_session* s, const char* mode) {
    return guarded(s, [&] {
        require_config(s);
        if (!mode || (std::string(mode) != "exact" && std::string(mode) != "mc"))
            throw ConfigError("mode must be 'exact' or 'mc'");
        s->config.mode = mode;
        return GB_OK;
    });
}

int gb_set_seed(gb_session* s, uint64_t seed) {
    return guarded(s, [&] {
        require_config(s);
        s->config.seed = seed;
        return GB_OK;
    });
}

int gb_set_budget(gb_session* s, uint64_t budget) {
    return guarded(s, [&] {
        require_config(s);
        if (budget < 1) throw ConfigError("budget must be >= 1");
        s->config.budget = budget;
        return GB_OK;
    });
}

int gb_set_out(gb_session* s, const char* path) {
    return guarded(s, [&] {
        require_config(s);
        if (!path) throw ConfigError("output path is null");
        s->config.out = path;
        return GB_OK;
    });
}

int gb_run(gb_session* s) {
    return guarded(s, [&] {
        require_config(s);
        auto rows = run_rows(s->config);
        std::string csv = rows_to_csv(rows);
        int rc = write_csv(s, csv);
        if (rc == GB_OK)
            s->report = "wrote " + std::to_string(rows.size()) + " rows to " + s->config.out;
        return rc;
    });
}

int gb_sweep(gb_session* s) {
    return guarded(s, [&] {
        require_config(s);
        auto rows = sweep_rows(s->config);
        std::string csv = rows_to_csv(rows);
        int rc = write_csv(s, csv);
        if (rc == GB_OK)
            s->report = "wrote " + std::to_string(rows.size()) + " rows to " + s->config.out;
        return rc;
    });
}

int gb_verify(gb_session* s) {
    return guarded(s, [&] {
        require_config(s);
        auto checks = verify_suite(s->config);
        s->report = verify_report(checks);
        if (!s->config.out.empty()) {
            std::ofstream f(s->config.out, std::ios::binary | std::ios::trunc);
            if (!f) throw ConfigError("cannot open output file '" + s->config.out + "'");
            f << s->report;
        }
        return verify_passed(checks) ? GB_OK : GB_INVARIANT_FAILURE;
    });
}

const char* gb_report(const gb_session* s) { return s ? s->report.c_str() : ""; }

const char* gb_last_error(const gb_session* s) { return s ? s->error.c_str() : ""; }

const char* gb_version(void) { return "genbound 1.0.0"; }

double gb_bernstein_h(double x) {
    try {
        return bernstein_h(x);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double gb_birthday_floor(int n, int d) {
    try {
        return birthday_floor(n, d);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double gb_vc_bound_rhs(int d_vc, int n) {
    try {
        return b_vc_rhs(d_vc, n);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // extern "C"
