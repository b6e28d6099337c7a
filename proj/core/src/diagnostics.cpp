#include "mcm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcm {

std::vector<int> assign_components(const GmmModel& model, const Matrix& data) {
    std::vector<int> labels;
    labels.reserve(data.size());
    for (const auto& x : data) {
        const std::vector<double> r = responsibilities(model, x);
        int best = 0;
        for (int c = 1; c < model.components; ++c)
            if (r[c] > r[best]) best = c;
        labels.push_back(best);
    }
    return labels;
}

std::vector<std::size_t> component_occupancy(const GmmModel& model, const Matrix& data) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(model.components), 0);
    for (int label : assign_components(model, data)) counts[static_cast<std::size_t>(label)] += 1;
    return counts;
}

namespace {

std::size_t total_count(const std::vector<std::size_t>& counts) {
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    return total;
}

}  // namespace

double imbalance_ratio(const std::vector<std::size_t>& counts) {
    if (counts.empty() || total_count(counts) == 0)
        throw std::invalid_argument("imbalance_ratio: no occupancy");
    const std::size_t mx = *std::max_element(counts.begin(), counts.end());
    const std::size_t mn = *std::min_element(counts.begin(), counts.end());
    return static_cast<double>(mx) / static_cast<double>(std::max<std::size_t>(1, mn));
}

double occupancy_entropy(const std::vector<std::size_t>& counts) {
    const std::size_t total = total_count(counts);
    if (counts.empty() || total == 0) throw std::invalid_argument("occupancy_entropy: no occupancy");
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    return h;
}

double mode_coverage(const std::vector<std::size_t>& counts, double threshold) {
    if (counts.empty()) throw std::invalid_argument("mode_coverage: no components");
    const std::size_t total = total_count(counts);
    if (total == 0) return 0.0;
    std::size_t covered = 0;
    for (std::size_t c : counts)
        if (static_cast<double>(c) / static_cast<double>(total) > threshold) covered += 1;
    return static_cast<double>(covered) / static_cast<double>(counts.size());
}

namespace {

double pair_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

double mean_cross(const Matrix& x, const Matrix& y) {
    double acc = 0.0;
    for (const auto& a : x)
        for (const auto& b : y) acc += pair_norm(a, b);
    return acc / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

}  // namespace

double energy_distance(const Matrix& x, const Matrix& y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("energy_distance: empty sample");
    const std::size_t d = x.front().size();
    for (const auto& row : x)
        if (row.size() != d) throw std::invalid_argument("energy_distance: ragged sample");
    for (const auto& row : y)
        if (row.size() != d) throw std::invalid_argument("energy_distance: dimension mismatch");
    return 2.0 * mean_cross(x, y) - mean_cross(x, x) - mean_cross(y, y);
}

SelectKResult search_components(const Matrix& data, int k_cap, const FitConfig& cfg) {
    if (k_cap < 1) throw std::invalid_argument("search_components: k_cap must be >= 1");
    k_cap = std::min<int>(k_cap, static_cast<int>(data.size()));

    SelectKResult out;
    double best = std::numeric_limits<double>::infinity();
    int rises = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_cap; ++k) {
        FitConfig local = cfg;
        local.seed = Rng::mix(cfg.seed, 0x5E1EC7ULL + static_cast<std::uint64_t>(k));
        GmmModel m = fit_em(data, k, local);
        const double score = bic(m, data);
        out.table.push_back({k, score, m.log_likelihood});
        if (score < best) {
            best = score;
            out.best_k = k;
            out.best_model = std::move(m);
        }
        rises = (k > 1 && score > prev) ? rises + 1 : 0;
        prev = score;
        if (rises >= 2) break;
    }
    return out;
}

std::vector<ClusterabilityPoint> clusterability(const Matrix& data, std::size_t window,
                                                std::size_t stride,
                                                const std::vector<int>& k_values,
                                                const FitConfig& cfg) {
    if (window == 0 || window > data.size())
        throw std::invalid_argument("clusterability: window must fit inside the data");
    if (stride == 0) throw std::invalid_argument("clusterability: stride must be >= 1");

    std::vector<ClusterabilityPoint> out;
    for (std::size_t start = 0; start + window <= data.size(); start += stride) {
        Matrix slice(data.begin() + static_cast<std::ptrdiff_t>(start),
                     data.begin() + static_cast<std::ptrdiff_t>(start + window));
        FitConfig local = cfg;
        local.seed = Rng::mix(cfg.seed, 0xC10D00ULL + static_cast<std::uint64_t>(start));
        SelectKResult res = select_k(slice, k_values, local);
        out.push_back({start, res.best_k, std::move(res.table)});
    }
    return out;
}

}  // namespace mcm
