#include "mcm/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mcm {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)

void check_matrix(const Matrix& data) {
    if (data.empty()) throw std::invalid_argument("gmm: empty data");
    const std::size_t d = data.front().size();
    if (d == 0) throw std::invalid_argument("gmm: zero-dimensional data");
    for (const auto& row : data)
        if (row.size() != d) throw std::invalid_argument("gmm: ragged data matrix");
}

double log_density(const std::vector<double>& x, const std::vector<double>& mean,
                   const std::vector<double>& var) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = x[j] - mean[j];
        acc += kLog2Pi + std::log(var[j]) + diff * diff / var[j];
    }
    return -0.5 * acc;
}

// log(sum(exp(v))) over entries that are > -inf.
double log_sum_exp(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double acc = 0.0;
    for (double x : v)
        if (std::isfinite(x)) acc += std::exp(x - mx);
    return mx + std::log(acc);
}

struct EStep {
    double ll = 0.0;
    Matrix resp;  // n x k
};

EStep e_step(const Matrix& data, const GmmModel& m) {
    const std::size_t n = data.size();
    const std::size_t k = static_cast<std::size_t>(m.components);
    std::vector<double> log_w(k);
    for (std::size_t c = 0; c < k; ++c)
        log_w[c] = m.weights[c] > 0.0 ? std::log(m.weights[c])
                                      : -std::numeric_limits<double>::infinity();
    EStep out;
    out.resp.assign(n, std::vector<double>(k, 0.0));
    std::vector<double> lp(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c)
            lp[c] = log_w[c] + log_density(data[i], m.means[c], m.variances[c]);
        const double lse = log_sum_exp(lp);
        out.ll += lse;
        for (std::size_t c = 0; c < k; ++c)
            out.resp[i][c] = std::isfinite(lp[c]) ? std::exp(lp[c] - lse) : 0.0;
    }
    return out;
}

GmmModel init_model(const Matrix& data, int k, const FitConfig& cfg, Rng& rng) {
    const std::size_t n = data.size();
    const std::size_t d = data.front().size();
    GmmModel m;
    m.components = k;
    m.dim = static_cast<int>(d);
    m.means = kmeanspp_init(data, k, rng);
    m.weights.assign(k, 0.0);
    m.variances.assign(k, std::vector<double>(d, 0.0));

    // Hard-assign to the nearest seed, then moment-match each group.
    std::vector<std::size_t> owner(n, 0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = data[i][j] - m.means[c][j];
                acc += diff * diff;
            }
            if (acc < best) {
                best = acc;
                owner[i] = static_cast<std::size_t>(c);
            }
        }
        count[owner[i]] += 1;
    }

    std::vector<double> global_mean(d, 0.0), global_var(d, 0.0);
    for (const auto& row : data)
        for (std::size_t j = 0; j < d; ++j) global_mean[j] += row[j];
    for (auto& v : global_mean) v /= static_cast<double>(n);
    for (const auto& row : data)
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = row[j] - global_mean[j];
            global_var[j] += diff * diff;
        }
    for (auto& v : global_var) v = std::max(v / static_cast<double>(n), cfg.variance_floor);

    Matrix group_mean(k, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) group_mean[owner[i]][j] += data[i][j];
    for (int c = 0; c < k; ++c) {
        // Add-one smoothing keeps every weight positive.
        m.weights[c] = (static_cast<double>(count[c]) + 1.0) / (static_cast<double>(n) + k);
        if (count[c] == 0) {
            m.variances[c] = global_var;
            continue;
        }
        for (std::size_t j = 0; j < d; ++j) group_mean[c][j] /= static_cast<double>(count[c]);
        m.means[c] = group_mean[c];
        for (std::size_t i = 0; i < n; ++i) {
            if (owner[i] != static_cast<std::size_t>(c)) continue;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = data[i][j] - group_mean[c][j];
                m.variances[c][j] += diff * diff;
            }
        }
        for (std::size_t j = 0; j < d; ++j)
            m.variances[c][j] =
                std::max(m.variances[c][j] / static_cast<double>(count[c]), cfg.variance_floor);
    }
    return m;
}

GmmModel run_em(const Matrix& data, int k, const FitConfig& cfg, Rng& rng) {
    const std::size_t n = data.size();
    const std::size_t d = data.front().size();
    GmmModel m = init_model(data, k, cfg, rng);

    double prev = -std::numeric_limits<double>::infinity();
    for (int it = 0;; ++it) {
        EStep es = e_step(data, m);
        m.ll_history.push_back(es.ll);
        m.log_likelihood = es.ll;
        if (it > 0 && std::abs(es.ll - prev) <= cfg.tol * std::max(1.0, std::abs(es.ll))) break;
        if (it >= cfg.max_iter) break;
        prev = es.ll;

        // M-step.
        for (int c = 0; c < k; ++c) {
            double nk = 0.0;
            for (std::size_t i = 0; i < n; ++i) nk += es.resp[i][c];
            if (nk <= 0.0) {
                m.weights[c] = 0.0;
                continue;  // dead component keeps its parameters
            }
            m.weights[c] = nk / static_cast<double>(n);
            std::vector<double> mean(d, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) mean[j] += es.resp[i][c] * data[i][j];
            for (auto& v : mean) v /= nk;
            std::vector<double> var(d, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    const double diff = data[i][j] - mean[j];
                    var[j] += es.resp[i][c] * diff * diff;
                }
            for (auto& v : var) v = std::max(v / nk, cfg.variance_floor);
            m.means[c] = std::move(mean);
            m.variances[c] = std::move(var);
        }
    }
    return m;
}

}  // namespace

Matrix kmeanspp_init(const Matrix& data, int k, Rng& rng) {
    check_matrix(data);
    const std::size_t n = data.size();
    if (k < 1) throw std::invalid_argument("kmeanspp_init: k must be >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kmeanspp_init: k exceeds number of points");

    std::vector<bool> chosen(n, false);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    Matrix centres;
    centres.reserve(k);

    std::size_t first = static_cast<std::size_t>(rng.below(n));
    centres.push_back(data[first]);
    chosen[first] = true;

    while (centres.size() < static_cast<std::size_t>(k)) {
        const auto& latest = centres.back();
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < latest.size(); ++j) {
                const double diff = data[i][j] - latest[j];
                acc += diff * diff;
            }
            dist2[i] = std::min(dist2[i], acc);
            total += dist2[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double u = rng.unit() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += dist2[i];
                if (u < cum) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {  // guard against rounding at the far end
                for (std::size_t i = n; i-- > 0;)
                    if (dist2[i] > 0.0) {
                        pick = i;
                        break;
                    }
            }
        }
        if (pick == n) {
            // Every remaining point coincides with a centre; take an unchosen one.
            std::vector<std::size_t> open;
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) open.push_back(i);
            pick = open[static_cast<std::size_t>(rng.below(open.size()))];
        }
        centres.push_back(data[pick]);
        chosen[pick] = true;
    }
    return centres;
}

GmmModel fit_em(const Matrix& data, int k, const FitConfig& cfg) {
    check_matrix(data);
    if (k < 1) throw std::invalid_argument("fit_em: k must be >= 1");
    if (static_cast<std::size_t>(k) > data.size())
        throw std::invalid_argument("fit_em: k exceeds number of points");
    if (cfg.restarts < 1) throw std::invalid_argument("fit_em: restarts must be >= 1");

    GmmModel best;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng(Rng::mix(cfg.seed, 0xE30000ULL + static_cast<std::uint64_t>(r)));
        GmmModel m = run_em(data, k, cfg, rng);
        if (m.log_likelihood > best_ll) {
            best_ll = m.log_likelihood;
            best = std::move(m);
        }
    }
    return best;
}

double log_likelihood(const GmmModel& model, const Matrix& data) {
    check_matrix(data);
    if (static_cast<int>(data.front().size()) != model.dim)
        throw std::invalid_argument("log_likelihood: dimension mismatch");
    double ll = 0.0;
    std::vector<double> lp(model.components);
    for (const auto& x : data) {
        for (int c = 0; c < model.components; ++c)
            lp[c] = model.weights[c] > 0.0
                        ? std::log(model.weights[c]) +
                              log_density(x, model.means[c], model.variances[c])
                        : -std::numeric_limits<double>::infinity();
        ll += log_sum_exp(lp);
    }
    return ll;
}

std::vector<double> responsibilities(const GmmModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.dim)
        throw std::invalid_argument("responsibilities: dimension mismatch");
    std::vector<double> lp(model.components);
    for (int c = 0; c < model.components; ++c)
        lp[c] = model.weights[c] > 0.0
                    ? std::log(model.weights[c]) + log_density(x, model.means[c], model.variances[c])
                    : -std::numeric_limits<double>::infinity();
    const double lse = log_sum_exp(lp);
    std::vector<double> r(model.components);
    for (int c = 0; c < model.components; ++c)
        r[c] = std::isfinite(lp[c]) ? std::exp(lp[c] - lse) : 0.0;
    return r;
}

double bic(const GmmModel& model, const Matrix& data) {
    check_matrix(data);
    const double n = static_cast<double>(data.size());
    const double k = model.components;
    const double d = model.dim;
    const double p = (k - 1.0) + k * d + k * d;
    return p * std::log(n) - 2.0 * log_likelihood(model, data);
}

SelectKResult select_k(const Matrix& data, const std::vector<int>& k_values,
                       const FitConfig& cfg) {
    check_matrix(data);
    if (k_values.empty()) throw std::invalid_argument("select_k: empty candidate list");
    std::vector<int> ks = k_values;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    if (static_cast<std::size_t>(ks.back()) > data.size())
        throw std::invalid_argument("select_k: largest K exceeds number of points");

    SelectKResult out;
    double best = std::numeric_limits<double>::infinity();
    for (int k : ks) {
        FitConfig local = cfg;
        local.seed = Rng::mix(cfg.seed, 0x5E1EC7ULL + static_cast<std::uint64_t>(k));
        GmmModel m = fit_em(data, k, local);
        const double score = bic(m, data);
        out.table.push_back({k, score, m.log_likelihood});
        if (score < best) {  // strict: ties keep the smaller K
            best = score;
            out.best_k = k;
            out.best_model = std::move(m);
        }
    }
    return out;
}

}  // namespace mcm
