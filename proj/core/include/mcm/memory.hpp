#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcm/descriptor.hpp"
#include "mcm/distance.hpp"
#include "mcm/rng.hpp"

namespace mcm {

struct MemorySample {
    std::int64_t id = 0;
    Descriptor descriptor;
    std::int64_t payload_ref = 0;  // opaque handle to the backing image
    double uncertainty = 0.0;      // in [0, ln(class_count)]
    std::int64_t age = 0;          // ticks since insertion
    // Diagnostic labels. Never read by any policy decision; carried only so
    // snapshots can be scored against a reference model.
    int diag_mode = -1;
    int diag_class = -1;
};

enum class MergeStrategy { Acc, Gcc, SmallestMerge, Lru };

std::string to_string(MergeStrategy s);
MergeStrategy merge_strategy_from_string(const std::string& name);

struct MemoryParams {
    int capacity = 64;  // per-cluster sample budget N
    int k_max = 5;
    double tau = 0.3;
    DistanceMetric metric;
    MergeStrategy strategy = MergeStrategy::Acc;
    double lambda_age = 1.0;
    double lambda_uncertainty = 1.0;
    double lambda_distance = 1.0;
    int class_count = 100;  // must be >= 2 (the uncertainty scale is ln of it)
    DescriptorKind kind = DescriptorKind::ChannelStats;
};

// k_max heuristic from the class count: one cluster per 20 classes, in [1, 5].
int compute_kmax(int class_count);

struct Cluster {
    std::int64_t creation_index = 0;
    std::int64_t last_access = 0;  // step of the most recent retrieval touching it
    std::vector<MemorySample> members;
    Descriptor centroid;
};

struct MergeRecord {
    std::size_t kept_index = 0;    // list position of the surviving cluster
    std::size_t removed_index = 0;
    std::int64_t kept_creation = 0;
    std::int64_t removed_creation = 0;
    std::size_t clusters_before = 0;
    std::size_t survivors = 0;
    std::vector<std::int64_t> dropped_ids;
    std::size_t comparisons = 0;  // centroid distance evaluations used to pick the pair
};

struct InsertOutcome {
    enum class Kind { Spawned, Assigned, Replaced };
    Kind kind = Kind::Spawned;
    std::size_t cluster_index = 0;
    std::int64_t evicted_id = -1;               // valid when kind == Replaced
    std::optional<MergeRecord> merge;           // set when the insert forced a consolidation
};

struct MemoryCounters {
    std::uint64_t inserts = 0;
    std::uint64_t spawns = 0;
    std::uint64_t assigned = 0;
    std::uint64_t replaced = 0;
    std::uint64_t evictions = 0;
    std::uint64_t merges = 0;
    std::uint64_t merge_dropped = 0;
    std::uint64_t assign_comparisons = 0;        // sample-to-centroid, during insert
    std::uint64_t consolidation_comparisons = 0; // centroid-to-centroid, during merges
};

struct SnapshotMember {
    std::int64_t id = 0;
    Descriptor descriptor;
    double uncertainty = 0.0;
    std::int64_t age = 0;
    int diag_mode = -1;
    int diag_class = -1;
    bool operator==(const SnapshotMember&) const = default;
};

struct SnapshotCluster {
    std::int64_t creation_index = 0;
    Descriptor centroid;
    std::vector<SnapshotMember> members;  // sorted by id
    bool operator==(const SnapshotCluster&) const = default;
};

struct MemorySnapshot {
    MemoryParams params;
    std::vector<SnapshotCluster> clusters;  // sorted by creation_index

    std::size_t total_members() const;
    std::vector<std::vector<double>> descriptor_matrix() const;
};

std::string snapshot_to_json(const MemorySnapshot& snap, int indent = 2);

// Replacement priority of a resident sample: a logistic age term, the
// normalized uncertainty, and the distance to the cluster centroid, each
// weighted by its lambda. Higher means evicted sooner.
double replacement_score(const MemorySample& s, const Descriptor& centroid,
                         const MemoryParams& params);

// Bounded memory organized as at most k_max clusters of at most `capacity`
// samples, grouped by descriptor similarity. Clusters are kept in creation
// order; a merge keeps the earlier creation index.
class MultiClusterMemory {
  public:
    explicit MultiClusterMemory(MemoryParams params);

    // Routes the sample to the nearest centroid; spawns a new cluster when
    // the nearest is farther than tau (consolidating first if the cluster
    // budget is exhausted); evicts the max-score member of a full cluster.
    // With k_max == 1 a single cluster absorbs everything and tau is moot.
    InsertOutcome insert(const MemorySample& s, std::int64_t step);

    // Merges one pair of clusters chosen by the strategy. Needs >= 2 clusters.
    MergeRecord consolidate(MergeStrategy strategy);

    // Draws floor(n_adapt / K) samples per cluster, without replacement when a
    // cluster has at least that many members, with replacement otherwise.
    // Marks every cluster as accessed at `step`. Needs n_adapt >= K >= 1.
    std::vector<MemorySample> retrieve(std::size_t n_adapt, Rng& rng, std::int64_t step);

    void age_tick();

    MemorySnapshot snapshot() const;

    const std::vector<Cluster>& clusters() const { return clusters_; }
    const MemoryParams& params() const { return params_; }
    const MemoryCounters& counters() const { return counters_; }
    const std::vector<MergeRecord>& merge_log() const { return merge_log_; }
    std::size_t cluster_count() const { return clusters_.size(); }
    std::size_t total_samples() const;
    bool empty() const { return clusters_.empty(); }

  private:
    // Refreshes the Mahalanobis covariance from resident descriptors when
    // that metric is configured; otherwise returns the configured metric.
    const DistanceMetric& effective_metric();
    MergeRecord consolidate_impl(MergeStrategy strategy, const DistanceMetric& metric);
    void spawn(const MemorySample& s, std::int64_t step);
    void recompute_centroid(Cluster& c);
    void validate_sample(const MemorySample& s) const;

    MemoryParams params_;
    DistanceMetric scratch_metric_;  // holds the refreshed Mahalanobis covariance
    std::vector<Cluster> clusters_;
    std::int64_t next_creation_ = 0;
    MemoryCounters counters_;
    std::vector<MergeRecord> merge_log_;
};

struct ScmParams {
    int capacity = 320;  // total sample budget
    double lambda_age = 1.0;
    double lambda_uncertainty = 1.0;
    int class_count = 100;
    DescriptorKind kind = DescriptorKind::ChannelStats;
};

// Single-pool baseline: same age/uncertainty bookkeeping, no clustering and
// no distance term in the eviction score.
class SingleClusterMemory {
  public:
    explicit SingleClusterMemory(ScmParams params);

    InsertOutcome insert(const MemorySample& s, std::int64_t step);
    // Uniform draw of n_adapt samples; without replacement when the pool is
    // large enough, with replacement otherwise.
    std::vector<MemorySample> retrieve(std::size_t n_adapt, Rng& rng, std::int64_t step);
    void age_tick();
    MemorySnapshot snapshot() const;

    const std::vector<MemorySample>& pool() const { return pool_; }
    const ScmParams& params() const { return params_; }
    const MemoryCounters& counters() const { return counters_; }
    std::size_t total_samples() const { return pool_.size(); }
    bool empty() const { return pool_.empty(); }

  private:
    ScmParams params_;
    std::vector<MemorySample> pool_;
    MemoryCounters counters_;
    std::int64_t last_access_ = 0;
};

}  // namespace mcm
