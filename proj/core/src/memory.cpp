#include "mcm/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mcm {

std::string to_string(MergeStrategy s) {
    switch (s) {
        case MergeStrategy::Acc: return "acc";
        case MergeStrategy::Gcc: return "gcc";
        case MergeStrategy::SmallestMerge: return "smallest_merge";
        case MergeStrategy::Lru: return "lru";
    }
    throw std::logic_error("unknown MergeStrategy");
}

MergeStrategy merge_strategy_from_string(const std::string& name) {
    if (name == "acc") return MergeStrategy::Acc;
    if (name == "gcc") return MergeStrategy::Gcc;
    if (name == "smallest_merge") return MergeStrategy::SmallestMerge;
    if (name == "lru") return MergeStrategy::Lru;
    throw std::invalid_argument("unknown merge strategy: " + name);
}

int compute_kmax(int class_count) {
    if (class_count < 1) throw std::invalid_argument("compute_kmax: class_count must be >= 1");
    return std::min(5, std::max(1, class_count / 20));
}

std::size_t MemorySnapshot::total_members() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.members.size();
    return n;
}

std::vector<std::vector<double>> MemorySnapshot::descriptor_matrix() const {
    std::vector<std::vector<double>> out;
    out.reserve(total_members());
    for (const auto& c : clusters)
        for (const auto& m : c.members) out.push_back(m.descriptor.values);
    return out;
}

std::string snapshot_to_json(const MemorySnapshot& snap, int indent) {
    nlohmann::ordered_json j;
    j["params"] = {
        {"capacity", snap.params.capacity},
        {"k_max", snap.params.k_max},
        {"tau", snap.params.tau},
        {"metric", to_string(snap.params.metric.kind)},
        {"strategy", to_string(snap.params.strategy)},
        {"lambda_age", snap.params.lambda_age},
        {"lambda_uncertainty", snap.params.lambda_uncertainty},
        {"lambda_distance", snap.params.lambda_distance},
        {"class_count", snap.params.class_count},
        {"descriptor_kind", to_string(snap.params.kind)},
    };
    j["clusters"] = nlohmann::ordered_json::array();
    for (const auto& c : snap.clusters) {
        nlohmann::ordered_json jc;
        jc["creation_index"] = c.creation_index;
        jc["centroid"] = c.centroid.values;
        jc["members"] = nlohmann::ordered_json::array();
        for (const auto& m : c.members) {
            jc["members"].push_back({
                {"id", m.id},
                {"descriptor", m.descriptor.values},
                {"uncertainty", m.uncertainty},
                {"age", m.age},
                {"diag_mode", m.diag_mode},
                {"diag_class", m.diag_class},
            });
        }
        j["clusters"].push_back(std::move(jc));
    }
    return j.dump(indent);
}

namespace {

double score_with_metric(const MemorySample& s, const Descriptor& centroid,
                         const MemoryParams& params, const DistanceMetric& metric) {
    if (params.class_count < 2)
        throw std::invalid_argument("replacement_score: class_count must be >= 2");
    const double age_term = 1.0 / (1.0 + std::exp(-static_cast<double>(s.age) / params.capacity));
    const double unc_term = s.uncertainty / std::log(static_cast<double>(params.class_count));
    const double dist_term = distance(s.descriptor, centroid, metric);
    return params.lambda_age * age_term + params.lambda_uncertainty * unc_term +
           params.lambda_distance * dist_term;
}

// Argmax over members; equal scores resolve to the lowest id.
std::size_t pick_eviction(const std::vector<MemorySample>& members, const Descriptor& centroid,
                          const MemoryParams& params, const DistanceMetric& metric) {
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    std::int64_t best_id = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double sc = score_with_metric(members[i], centroid, params, metric);
        if (sc > best_score || (sc == best_score && members[i].id < best_id)) {
            best = i;
            best_score = sc;
            best_id = members[i].id;
        }
    }
    return best;
}

}  // namespace

double replacement_score(const MemorySample& s, const Descriptor& centroid,
                         const MemoryParams& params) {
    return score_with_metric(s, centroid, params, params.metric);
}

MultiClusterMemory::MultiClusterMemory(MemoryParams params) : params_(std::move(params)) {
    if (params_.capacity < 1) throw std::invalid_argument("memory: capacity must be >= 1");
    if (params_.k_max < 1) throw std::invalid_argument("memory: k_max must be >= 1");
    if (!(params_.tau >= 0.0)) throw std::invalid_argument("memory: tau must be >= 0");
    if (params_.class_count < 2) throw std::invalid_argument("memory: class_count must be >= 2");
    scratch_metric_ = params_.metric;
}

void MultiClusterMemory::validate_sample(const MemorySample& s) const {
    if (s.descriptor.kind != params_.kind)
        throw std::invalid_argument("memory: descriptor kind mismatch");
    const double ceiling = std::log(static_cast<double>(params_.class_count));
    if (!(s.uncertainty >= 0.0 && s.uncertainty <= ceiling))
        throw std::invalid_argument("memory: uncertainty outside [0, ln(class_count)]");
}

const DistanceMetric& MultiClusterMemory::effective_metric() {
    if (params_.metric.kind != MetricKind::Mahalanobis) return params_.metric;
    // Per-coordinate population variance over every resident descriptor.
    std::size_t dim = 0;
    for (const auto& c : clusters_)
        if (!c.members.empty()) {
            dim = c.members.front().descriptor.dim();
            break;
        }
    scratch_metric_ = params_.metric;
    scratch_metric_.diag_cov.assign(dim, 0.0);
    std::vector<double> mean(dim, 0.0);
    std::size_t n = 0;
    for (const auto& c : clusters_)
        for (const auto& m : c.members) {
            for (std::size_t i = 0; i < dim; ++i) mean[i] += m.descriptor.values[i];
            ++n;
        }
    if (n == 0) return scratch_metric_;
    for (auto& v : mean) v /= static_cast<double>(n);
    for (const auto& c : clusters_)
        for (const auto& m : c.members)
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = m.descriptor.values[i] - mean[i];
                scratch_metric_.diag_cov[i] += d * d;
            }
    for (auto& v : scratch_metric_.diag_cov) v /= static_cast<double>(n);
    return scratch_metric_;
}

void MultiClusterMemory::spawn(const MemorySample& s, std::int64_t step) {
    Cluster c;
    c.creation_index = next_creation_++;
    c.last_access = step;
    c.members.push_back(s);
    c.centroid = s.descriptor;
    clusters_.push_back(std::move(c));
    counters_.spawns += 1;
}

void MultiClusterMemory::recompute_centroid(Cluster& c) {
    const std::size_t dim = c.members.front().descriptor.dim();
    c.centroid.kind = params_.kind;
    c.centroid.values.assign(dim, 0.0);
    for (const auto& m : c.members)
        for (std::size_t i = 0; i < dim; ++i) c.centroid.values[i] += m.descriptor.values[i];
    for (auto& v : c.centroid.values) v /= static_cast<double>(c.members.size());
}

InsertOutcome MultiClusterMemory::insert(const MemorySample& s, std::int64_t step) {
    validate_sample(s);
    counters_.inserts += 1;

    InsertOutcome out;
    if (clusters_.empty()) {
        spawn(s, step);
        out.kind = InsertOutcome::Kind::Spawned;
        out.cluster_index = 0;
        return out;
    }

    const DistanceMetric& metric = effective_metric();
    std::size_t nearest = 0;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < clusters_.size(); ++i) {
        const double d = distance(s.descriptor, clusters_[i].centroid, metric);
        counters_.assign_comparisons += 1;
        if (d < nearest_dist) {
            nearest = i;
            nearest_dist = d;
        }
    }

    if (nearest_dist > params_.tau) {
        if (clusters_.size() < static_cast<std::size_t>(params_.k_max)) {
            spawn(s, step);
            out.kind = InsertOutcome::Kind::Spawned;
            out.cluster_index = clusters_.size() - 1;
            return out;
        }
        if (params_.k_max >= 2) {
            out.merge = consolidate_impl(params_.strategy, metric);
            spawn(s, step);
            out.kind = InsertOutcome::Kind::Spawned;
            out.cluster_index = clusters_.size() - 1;
            return out;
        }
        // k_max == 1: nothing to consolidate, the single cluster absorbs it.
        nearest = 0;
    }

    Cluster& c = clusters_[nearest];
    if (c.members.size() < static_cast<std::size_t>(params_.capacity)) {
        c.members.push_back(s);
        recompute_centroid(c);
        counters_.assigned += 1;
        out.kind = InsertOutcome::Kind::Assigned;
        out.cluster_index = nearest;
        return out;
    }

    const std::size_t victim = pick_eviction(c.members, c.centroid, params_, metric);
    out.evicted_id = c.members[victim].id;
    c.members.erase(c.members.begin() + static_cast<std::ptrdiff_t>(victim));
    c.members.push_back(s);
    recompute_centroid(c);
    counters_.replaced += 1;
    counters_.evictions += 1;
    out.kind = InsertOutcome::Kind::Replaced;
    out.cluster_index = nearest;
    return out;
}

MergeRecord MultiClusterMemory::consolidate(MergeStrategy strategy) {
    return consolidate_impl(strategy, effective_metric());
}

MergeRecord MultiClusterMemory::consolidate_impl(MergeStrategy strategy,
                                                 const DistanceMetric& metric) {
    const std::size_t k = clusters_.size();
    if (k < 2) throw std::logic_error("consolidate: needs at least two clusters");

    std::size_t a = 0, b = 1;
    std::size_t comparisons = 0;
    auto centroid_dist = [&](std::size_t i, std::size_t j) {
        ++comparisons;
        return distance(clusters_[i].centroid, clusters_[j].centroid, metric);
    };

    switch (strategy) {
        case MergeStrategy::Acc: {
            // Closest pair among creation-order neighbours: K-1 comparisons.
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < k; ++i) {
                const double d = centroid_dist(i, i + 1);
                if (d < best) {
                    best = d;
                    a = i;
                    b = i + 1;
                }
            }
            break;
        }
        case MergeStrategy::Gcc: {
            // Closest pair over all pairs: K(K-1)/2 comparisons.
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j) {
                    const double d = centroid_dist(i, j);
                    if (d < best) {
                        best = d;
                        a = i;
                        b = j;
                    }
                }
            break;
        }
        case MergeStrategy::SmallestMerge: {
            std::size_t smallest = 0;
            for (std::size_t i = 1; i < k; ++i)
                if (clusters_[i].members.size() < clusters_[smallest].members.size()) smallest = i;
            std::size_t nearest = smallest == 0 ? 1 : 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < k; ++i) {
                if (i == smallest) continue;
                const double d = centroid_dist(smallest, i);
                if (d < best) {
                    best = d;
                    nearest = i;
                }
            }
            a = std::min(smallest, nearest);
            b = std::max(smallest, nearest);
            break;
        }
        case MergeStrategy::Lru: {
            std::size_t stale = 0;
            for (std::size_t i = 1; i < k; ++i)
                if (clusters_[i].last_access < clusters_[stale].last_access) stale = i;
            std::size_t nearest = stale == 0 ? 1 : 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < k; ++i) {
                if (i == stale) continue;
                const double d = centroid_dist(stale, i);
                if (d < best) {
                    best = d;
                    nearest = i;
                }
            }
            a = std::min(stale, nearest);
            b = std::max(stale, nearest);
            break;
        }
    }
    counters_.consolidation_comparisons += comparisons;

    MergeRecord rec;
    rec.kept_index = a;
    rec.removed_index = b;
    rec.kept_creation = clusters_[a].creation_index;
    rec.removed_creation = clusters_[b].creation_index;
    rec.clusters_before = k;
    rec.comparisons = comparisons;

    // Union of both member lists, each tagged with its source creation index.
    struct Tagged {
        MemorySample sample;
        std::int64_t creation;
    };
    std::vector<Tagged> pool;
    pool.reserve(clusters_[a].members.size() + clusters_[b].members.size());
    for (const auto& m : clusters_[a].members) pool.push_back({m, clusters_[a].creation_index});
    for (const auto& m : clusters_[b].members) pool.push_back({m, clusters_[b].creation_index});

    const std::size_t cap = static_cast<std::size_t>(params_.capacity);
    if (pool.size() > cap) {
        std::sort(pool.begin(), pool.end(), [](const Tagged& x, const Tagged& y) {
            if (x.sample.uncertainty != y.sample.uncertainty)
                return x.sample.uncertainty < y.sample.uncertainty;
            if (x.creation != y.creation) return x.creation < y.creation;
            return x.sample.id < y.sample.id;
        });
        for (std::size_t i = cap; i < pool.size(); ++i) rec.dropped_ids.push_back(pool[i].sample.id);
        pool.resize(cap);
        counters_.merge_dropped += rec.dropped_ids.size();
    }

    Cluster& survivor = clusters_[a];
    survivor.last_access = std::max(survivor.last_access, clusters_[b].last_access);
    survivor.members.clear();
    for (auto& t : pool) survivor.members.push_back(std::move(t.sample));
    recompute_centroid(survivor);
    clusters_.erase(clusters_.begin() + static_cast<std::ptrdiff_t>(b));

    rec.survivors = survivor.members.size();
    counters_.merges += 1;
    merge_log_.push_back(rec);
    return rec;
}

std::vector<MemorySample> MultiClusterMemory::retrieve(std::size_t n_adapt, Rng& rng,
                                                       std::int64_t step) {
    if (clusters_.empty()) throw std::runtime_error("retrieve: memory is empty");
    const std::size_t k = clusters_.size();
    if (n_adapt < k)
        throw std::invalid_argument("retrieve: n_adapt must be >= cluster count");
    const std::size_t quota = n_adapt / k;
    std::vector<MemorySample> out;
    out.reserve(quota * k);
    for (auto& c : clusters_) {
        c.last_access = step;
        if (c.members.size() >= quota) {
            for (std::size_t i : rng.sample_without_replacement(c.members.size(), quota))
                out.push_back(c.members[i]);
        } else {
            for (std::size_t i = 0; i < quota; ++i)
                out.push_back(c.members[rng.below(c.members.size())]);
        }
    }
    return out;
}

void MultiClusterMemory::age_tick() {
    for (auto& c : clusters_)
        for (auto& m : c.members) m.age += 1;
}

MemorySnapshot MultiClusterMemory::snapshot() const {
    MemorySnapshot snap;
    snap.params = params_;
    snap.clusters.reserve(clusters_.size());
    for (const auto& c : clusters_) {
        SnapshotCluster sc;
        sc.creation_index = c.creation_index;
        sc.centroid = c.centroid;
        sc.members.reserve(c.members.size());
        for (const auto& m : c.members)
            sc.members.push_back({m.id, m.descriptor, m.uncertainty, m.age, m.diag_mode,
                                  m.diag_class});
        std::sort(sc.members.begin(), sc.members.end(),
                  [](const SnapshotMember& x, const SnapshotMember& y) { return x.id < y.id; });
        snap.clusters.push_back(std::move(sc));
    }
    return snap;
}

std::size_t MultiClusterMemory::total_samples() const {
    std::size_t n = 0;
    for (const auto& c : clusters_) n += c.members.size();
    return n;
}

SingleClusterMemory::SingleClusterMemory(ScmParams params) : params_(params) {
    if (params_.capacity < 1) throw std::invalid_argument("scm: capacity must be >= 1");
    if (params_.class_count < 2) throw std::invalid_argument("scm: class_count must be >= 2");
}

InsertOutcome SingleClusterMemory::insert(const MemorySample& s, std::int64_t step) {
    (void)step;
    if (s.descriptor.kind != params_.kind)
        throw std::invalid_argument("scm: descriptor kind mismatch");
    counters_.inserts += 1;
    InsertOutcome out;
    out.cluster_index = 0;
    if (pool_.size() < static_cast<std::size_t>(params_.capacity)) {
        pool_.push_back(s);
        counters_.assigned += 1;
        out.kind = InsertOutcome::Kind::Assigned;
        return out;
    }
    const double log_nc = std::log(static_cast<double>(params_.class_count));
    std::size_t victim = 0;
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_id = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < pool_.size(); ++i) {
        const double age_term =
            1.0 / (1.0 + std::exp(-static_cast<double>(pool_[i].age) / params_.capacity));
        const double sc = params_.lambda_age * age_term +
                          params_.lambda_uncertainty * pool_[i].uncertainty / log_nc;
        if (sc > best || (sc == best && pool_[i].id < best_id)) {
            victim = i;
            best = sc;
            best_id = pool_[i].id;
        }
    }
    out.evicted_id = pool_[victim].id;
    pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(victim));
    pool_.push_back(s);
    counters_.replaced += 1;
    counters_.evictions += 1;
    out.kind = InsertOutcome::Kind::Replaced;
    return out;
}

std::vector<MemorySample> SingleClusterMemory::retrieve(std::size_t n_adapt, Rng& rng,
                                                        std::int64_t step) {
    if (pool_.empty()) throw std::runtime_error("retrieve: memory is empty");
    if (n_adapt == 0) throw std::invalid_argument("retrieve: n_adapt must be >= 1");
    last_access_ = step;
    std::vector<MemorySample> out;
    out.reserve(n_adapt);
    if (pool_.size() >= n_adapt) {
        for (std::size_t i : rng.sample_without_replacement(pool_.size(), n_adapt))
            out.push_back(pool_[i]);
    } else {
        for (std::size_t i = 0; i < n_adapt; ++i) out.push_back(pool_[rng.below(pool_.size())]);
    }
    return out;
}

void SingleClusterMemory::age_tick() {
    for (auto& m : pool_) m.age += 1;
}

MemorySnapshot SingleClusterMemory::snapshot() const {
    MemorySnapshot snap;
    snap.params.capacity = params_.capacity;
    snap.params.k_max = 1;
    snap.params.tau = 0.0;
    snap.params.strategy = MergeStrategy::Acc;
    snap.params.lambda_age = params_.lambda_age;
    snap.params.lambda_uncertainty = params_.lambda_uncertainty;
    snap.params.lambda_distance = 0.0;
    snap.params.class_count = params_.class_count;
    snap.params.kind = params_.kind;
    if (pool_.empty()) return snap;

    SnapshotCluster sc;
    sc.creation_index = 0;
    const std::size_t dim = pool_.front().descriptor.dim();
    sc.centroid.kind = params_.kind;
    sc.centroid.values.assign(dim, 0.0);
    for (const auto& m : pool_) {
        for (std::size_t i = 0; i < dim; ++i) sc.centroid.values[i] += m.descriptor.values[i];
        sc.members.push_back({m.id, m.descriptor, m.uncertainty, m.age, m.diag_mode, m.diag_class});
    }
    for (auto& v : sc.centroid.values) v /= static_cast<double>(pool_.size());
    std::sort(sc.members.begin(), sc.members.end(),
              [](const SnapshotMember& x, const SnapshotMember& y) { return x.id < y.id; });
    snap.clusters.push_back(std::move(sc));
    return snap;
}

}  // namespace mcm
