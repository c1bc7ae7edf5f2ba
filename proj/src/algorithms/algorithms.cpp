#include "algorithms/algorithms.hpp"

#include <algorithm>
#include <cmath>

namespace genbound {

OneHotGDConfig OneHotGDConfig::defaults(int n, int d_override) {
    if (n < 1) throw std::invalid_argument("OneHotGDConfig: n must be >= 1");
    OneHotGDConfig cfg;
    cfg.n = n;
    cfg.d = d_override > 0 ? d_override : 2 * n * n;
    cfg.eta = 1.0 / (n * std::sqrt(static_cast<double>(n)));
    cfg.T = n * n;
    return cfg;
}

namespace {

int onehot_coord(const Instance& z, int d) {
    if (z.x.size() != 1)
        throw std::invalid_argument("gd_onehot: instance is not a one-hot coordinate");
    double v = z.x[0];
    int k = static_cast<int>(v);
    if (static_cast<double>(k) != v || k < 0 || k >= d)
        throw std::invalid_argument("gd_onehot: one-hot coordinate " + fmt_g12(v) +
                                    " outside [0," + std::to_string(d) + ")");
    return k;
}

std::vector<int64_t> count_vector(const OneHotGDConfig& cfg, const DiscreteDistribution& dist,
                                  std::span<const int> sample) {
    std::vector<int64_t> counts(static_cast<size_t>(cfg.d), 0);
    for (int id : sample)
        ++counts[static_cast<size_t>(onehot_coord(dist.support[static_cast<size_t>(id)], cfg.d))];
    return counts;
}

std::vector<int64_t> gd_key(const OneHotGDConfig& cfg, std::vector<int64_t> counts) {
    // eta*T = 0 collapses every sample onto the origin
    if (cfg.eta * cfg.T == 0.0) return {0};
    return counts;
}

}  // namespace

Hypothesis gd_onehot_closed(const OneHotGDConfig& cfg, const DiscreteDistribution& dist,
                            std::span<const int> sample) {
    if (sample.empty()) throw std::invalid_argument("gd_onehot: empty sample");
    auto counts = count_vector(cfg, dist, sample);
    const double ns = static_cast<double>(sample.size());
    double sq = 0.0;
    for (int64_t c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
    const double norm_mu = std::sqrt(sq) / ns;
    const double factor = cfg.eta * static_cast<double>(cfg.T);
    Hypothesis h;
    h.w.resize(static_cast<size_t>(cfg.d), 0.0);
    if (factor * norm_mu <= 1.0) {
        for (int k = 0; k < cfg.d; ++k)
            h.w[static_cast<size_t>(k)] = factor * static_cast<double>(counts[static_cast<size_t>(k)]) / ns;
    } else {
        const double inv = 1.0 / std::sqrt(sq);
        for (int k = 0; k < cfg.d; ++k)
            h.w[static_cast<size_t>(k)] = static_cast<double>(counts[static_cast<size_t>(k)]) * inv;
    }
    h.key = gd_key(cfg, std::move(counts));
    return h;
}

Hypothesis gd_onehot_iterative(const OneHotGDConfig& cfg, const DiscreteDistribution& dist,
                               std::span<const int> sample) {
    if (sample.empty()) throw std::invalid_argument("gd_onehot: empty sample");
    auto counts = count_vector(cfg, dist, sample);
    const double ns = static_cast<double>(sample.size());
    std::vector<double> mu(static_cast<size_t>(cfg.d));
    for (int k = 0; k < cfg.d; ++k)
        mu[static_cast<size_t>(k)] = static_cast<double>(counts[static_cast<size_t>(k)]) / ns;
    Hypothesis h;
    h.w.resize(static_cast<size_t>(cfg.d), 0.0);
    for (int t = 0; t < cfg.T; ++t) {
        double sq = 0.0;
        for (int k = 0; k < cfg.d; ++k) {
            h.w[static_cast<size_t>(k)] += cfg.eta * mu[static_cast<size_t>(k)];
            sq += h.w[static_cast<size_t>(k)] * h.w[static_cast<size_t>(k)];
        }
        if (sq > 1.0) {
            const double inv = 1.0 / std::sqrt(sq);
            for (double& v : h.w) v *= inv;
        }
    }
    h.key = gd_key(cfg, std::move(counts));
    return h;
}

Hypothesis sign_erm(const RademacherERMConfig& cfg, const DiscreteDistribution& dist,
                    std::span<const int> sample) {
    if (sample.empty()) throw std::invalid_argument("sign_erm: empty sample");
    int64_t total = 0;
    for (int id : sample) {
        const Instance& z = dist.support[static_cast<size_t>(id)];
        if (z.x.size() != 1 || (z.x[0] != 1.0 && z.x[0] != -1.0))
            throw std::invalid_argument("sign_erm: instance not in the two-point support");
        total += z.x[0] > 0 ? 1 : -1;
    }
    int s = total > 0 ? 1 : (total < 0 ? -1 : cfg.tie_break);
    Hypothesis h;
    h.w = {s * cfg.R0};
    h.key = {s};
    return h;
}

Hypothesis regularized_erm(const RegularizedERMConfig& cfg, const DiscreteDistribution& dist,
                           std::span<const int> sample) {
    if (cfg.lambda <= 0.0) throw std::invalid_argument("regularized_erm: lambda must be > 0");
    if (sample.empty()) throw std::invalid_argument("regularized_erm: empty sample");
    const size_t dim = dist.support[0].x.size();
    Hypothesis h;
    h.w.assign(dim, 0.0);
    for (int id : sample) {
        const Instance& z = dist.support[static_cast<size_t>(id)];
        if (z.x.size() != dim)
            throw std::invalid_argument("regularized_erm: inconsistent instance dimension");
        for (size_t k = 0; k < dim; ++k) h.w[k] += z.x[k];
    }
    const double scale = cfg.L / (2.0 * cfg.lambda * static_cast<double>(sample.size()));
    h.key.resize(dim);
    for (size_t k = 0; k < dim; ++k) {
        h.w[k] *= scale;
        h.key[k] = llround(h.w[k] * 1e9);  // 1e-9 grid; no exact integer statistic here
    }
    return h;
}

Hypothesis threshold_erm(const ThresholdERMConfig& cfg, const DiscreteDistribution& dist,
                         std::span<const int> sample) {
    if (sample.empty()) throw std::invalid_argument("threshold_erm: empty sample");
    int max_neg = 0;                   // largest x labeled 0
    int min_pos = cfg.grid_size + 1;   // smallest x labeled 1
    for (int id : sample) {
        const Instance& z = dist.support[static_cast<size_t>(id)];
        int x = static_cast<int>(z.x.at(0));
        if (z.y != 0.0 && z.y != 1.0)
            throw std::invalid_argument("threshold_erm: labels must be 0/1");
        if (z.y == 1.0)
            min_pos = std::min(min_pos, x);
        else
            max_neg = std::max(max_neg, x);
    }
    if (min_pos <= max_neg)
        throw std::invalid_argument("threshold_erm: sample is not realizable by a threshold");
    // no positive example: fall back to the all-negative sentinel
    int theta = (min_pos == cfg.grid_size + 1) ? cfg.grid_size + 1 : max_neg + 1;
    Hypothesis h;
    h.w = {static_cast<double>(theta)};
    h.key = {theta};
    return h;
}

// ---------------------------------------------------------------------------

Problem make_onehot_gd_problem(int n, int d, double eta, int T) {
    OneHotGDConfig cfg = OneHotGDConfig::defaults(n, d);
    if (eta > 0) cfg.eta = eta;
    if (T >= 0) cfg.T = T;

    Problem p;
    p.name = "onehot-gd";
    p.dist.support.resize(static_cast<size_t>(cfg.d));
    p.dist.mass.assign(static_cast<size_t>(cfg.d), 1.0 / cfg.d);
    for (int k = 0; k < cfg.d; ++k) p.dist.support[static_cast<size_t>(k)].x = {static_cast<double>(k)};
    p.dist.validate();

    p.alg.name = "gd-onehot";
    p.alg.symmetric = true;
    p.alg.train = [cfg](const DiscreteDistribution& dist, std::span<const int> sample, int) {
        return gd_onehot_closed(cfg, dist, sample);
    };

    p.loss.name = "linear-onehot";
    p.loss.eval = [](const Hypothesis& h, const Instance& z) {
        int k = static_cast<int>(z.x.at(0));
        return -h.w.at(static_cast<size_t>(k));
    };
    p.loss.declared_range = {{-1.0, 0.0}};
    return p;
}

Problem make_sign_erm_problem(double L, double R0) {
    if (L <= 0 || R0 <= 0) throw std::invalid_argument("sign-erm: L and R0 must be > 0");
    RademacherERMConfig cfg;
    cfg.L = L;
    cfg.R0 = R0;

    Problem p;
    p.name = "sign-erm";
    p.dist.support.resize(2);
    p.dist.support[0].x = {1.0};
    p.dist.support[1].x = {-1.0};
    p.dist.mass = {0.5, 0.5};
    p.dist.validate();

    p.alg.name = "sign-erm";
    p.alg.symmetric = true;
    p.alg.train = [cfg](const DiscreteDistribution& dist, std::span<const int> sample, int) {
        return sign_erm(cfg, dist, sample);
    };

    p.loss.name = "linear-two-point";
    p.loss.eval = [L](const Hypothesis& h, const Instance& z) {
        return -L * h.w.at(0) * z.x.at(0);
    };
    p.loss.declared_range = {{-L * R0, L * R0}};
    return p;
}

Problem make_sign_erm_scaled_problem(int n, double L) {
    Problem p = make_sign_erm_problem(L, 1.0 / std::sqrt(static_cast<double>(n)));
    p.name = "sign-erm-scaled";
    return p;
}

Problem make_regularized_erm_problem(double lambda, double L) {
    if (lambda <= 0) throw std::invalid_argument("regularized-erm: lambda must be > 0");
    RegularizedERMConfig cfg;
    cfg.lambda = lambda;
    cfg.L = L;

    Problem p;
    p.name = "regularized-erm";
    p.dist.support.resize(3);
    p.dist.support[0].x = {1.0, 0.0};
    p.dist.support[1].x = {0.0, 1.0};
    p.dist.support[2].x = {1.0, 1.0};
    p.dist.mass = {0.5, 0.25, 0.25};
    p.dist.validate();

    p.alg.name = "regularized-erm";
    p.alg.symmetric = true;
    p.alg.train = [cfg](const DiscreteDistribution& dist, std::span<const int> sample, int) {
        return regularized_erm(cfg, dist, sample);
    };

    p.loss.name = "linear";
    p.loss.eval = [L](const Hypothesis& h, const Instance& z) {
        double dot = 0.0;
        for (size_t k = 0; k < h.w.size(); ++k) dot += h.w[k] * z.x.at(k);
        return -L * dot;
    };
    p.loss.declared_range = {{-L * L / lambda, 0.0}};
    return p;
}

Problem make_threshold_erm_problem(int grid_size, int true_threshold) {
    if (grid_size < 1) throw std::invalid_argument("threshold-erm: grid_size must be >= 1");
    if (true_threshold < 1 || true_threshold > grid_size)
        throw std::invalid_argument("threshold-erm: true_threshold must lie in [1, grid_size]");
    ThresholdERMConfig cfg;
    cfg.grid_size = grid_size;
    cfg.true_threshold = true_threshold;

    Problem p;
    p.name = "threshold-erm";
    p.dist.support.resize(static_cast<size_t>(grid_size));
    p.dist.mass.assign(static_cast<size_t>(grid_size), 1.0 / grid_size);
    for (int x = 1; x <= grid_size; ++x) {
        p.dist.support[static_cast<size_t>(x - 1)].x = {static_cast<double>(x)};
        p.dist.support[static_cast<size_t>(x - 1)].y = x >= true_threshold ? 1.0 : 0.0;
    }
    p.dist.validate();

    p.alg.name = "threshold-erm";
    p.alg.symmetric = true;
    p.alg.train = [cfg](const DiscreteDistribution& dist, std::span<const int> sample, int) {
        return threshold_erm(cfg, dist, sample);
    };

    p.loss.name = "zero-one";
    p.loss.eval = [](const Hypothesis& h, const Instance& z) {
        int pred = z.x.at(0) >= h.w.at(0) ? 1 : 0;
        return pred == static_cast<int>(z.y) ? 0.0 : 1.0;
    };
    p.loss.declared_range = {{0.0, 1.0}};
    p.predict = [](const Hypothesis& h, const Instance& z) {
        return z.x.at(0) >= h.w.at(0) ? 1 : 0;
    };

    Hypothesis star;
    star.w = {static_cast<double>(true_threshold)};
    star.key = {true_threshold};
    p.analytic_minimizer = star;
    return p;
}

}  // namespace genbound
