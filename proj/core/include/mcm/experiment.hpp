#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mcm/diagnostics.hpp"
#include "mcm/memory.hpp"
#include "mcm/stream.hpp"

namespace mcm {

// End-to-end runs: stream -> memory -> periodic diagnostics -> CSV/JSON
// artifacts. All outputs are deterministic functions of (config, seed); a
// rerun produces byte-identical files.

struct DiagnosticsConfig {
    int window = 640;           // trailing probe descriptors kept for the reference fit
    int emit_stride = 50;       // steps between metric rows
    int refresh_stride = 100;   // steps between reference refits
    int kref_cap = 12;          // component search ceiling for the reference
    double coverage_threshold = 0.01;
    bool with_reference = true; // disable to skip occupancy metrics (energy only)
    int probe_per_step = 1;     // descriptors fed to the trailing window each step
    FitConfig fit{200, 1e-6, 1e-6, 2, 0};  // max_iter, tol, variance_floor, restarts, seed
};

struct ExperimentConfig {
    StreamConfig stream;
    MemoryParams memory;
    DiagnosticsConfig diagnostics;
    int scm_capacity = 0;  // single-pool budget; 0 means k_max * capacity
    int n_adapt = 64;
    long steps = -1;       // negative means one pass of the schedule
    std::uint64_t seed = 1;
    std::string variant = "mcm";  // "mcm" or "scm"
};

// JSON round trip. Unknown keys are rejected; missing keys take defaults.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg, int indent = 2);

struct MetricsRow {
    long step = 0;  // steps completed at emission time
    double imbalance = 0.0;
    double entropy = 0.0;
    double coverage = 0.0;
    double energy = 0.0;
    int reference_k = 0;  // 0 while no reference has been fitted
    int clusters = 0;
    std::size_t samples = 0;
};

struct RunResult {
    std::vector<MetricsRow> rows;
    MemoryCounters counters;
    std::vector<MergeRecord> merges;
    MemorySnapshot final_snapshot;
    long steps = 0;
    double wall_ms = 0.0;
    // Means over rows where the quantity is defined.
    double mean_imbalance = 0.0;
    double mean_entropy = 0.0;
    double mean_coverage = 0.0;
    double mean_energy = 0.0;
};

// Called after every completed step; exactly one memory pointer is non-null.
using StepObserver =
    std::function<void(long step, const MultiClusterMemory*, const SingleClusterMemory*)>;

RunResult run_experiment(const ExperimentConfig& cfg, const StepObserver& observer = {});

// metrics.csv content: header plus one line per row, locale-independent.
std::string metrics_csv(const std::vector<MetricsRow>& rows, const std::string& variant);

// Runs and writes metrics.csv, snapshot.json, manifest.json under out_dir.
RunResult run_simulate(const ExperimentConfig& cfg, const std::string& out_dir,
                       const StepObserver& observer = {});

struct ClusterabilitySummary {
    std::vector<ClusterabilityPoint> points;
    double mean_k = 0.0;
};

// Sliding-window component-count survey over the raw descriptor stream
// (memory not involved). Writes clusterability.csv, bic.csv, manifest.json.
// An empty schedule defaults to the cycling preset with batch 8.
ClusterabilitySummary run_clusterability(const ExperimentConfig& cfg, std::size_t window,
                                         std::size_t stride, int k_cap,
                                         const std::string& out_dir);

struct AblateCell {
    std::string axis;
    std::string value;
    std::uint64_t seed = 0;
    long steps = 0;
    double mean_imbalance = 0.0;
    double mean_entropy = 0.0;
    double mean_coverage = 0.0;
    double mean_energy = 0.0;
    int clusters_final = 0;
    std::uint64_t merges = 0;
    std::uint64_t evictions = 0;
    double wall_ms = 0.0;
};

// One-axis sweep ("tau", "k_max", "metric", "strategy") with `repeats` seeds
// per value. Writes ablate.csv and manifest.json.
std::vector<AblateCell> run_ablate(const ExperimentConfig& base, const std::string& axis,
                                   int repeats, const std::string& out_dir);

struct ScalingCell {
    long steps = 0;
    int seed_index = 0;
    std::string variant;
    double energy = 0.0;
    std::size_t samples = 0;
    double wall_ms = 0.0;
};

// Paired multi/single-pool runs per (step count, seed); the reference model
// is skipped and only the final trailing-window energy distance is recorded.
// Writes scaling.csv and manifest.json.
std::vector<ScalingCell> run_scaling(const ExperimentConfig& base,
                                     const std::vector<long>& step_counts, int seeds,
                                     const std::string& out_dir);

// Final-memory 2-D projection (principal axes of retained descriptors) next
// to an equal-per-mode reference draw. Writes projection.csv, manifest.json.
void export_projection(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace mcm
