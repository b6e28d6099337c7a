#pragma once

#include <cstddef>
#include <vector>

#include "mcm/gmm.hpp"

namespace mcm {

// Distribution diagnostics for memory contents. A reference mixture fitted on
// a trailing window of raw stream descriptors acts as the mode dictionary;
// retained descriptors are hard-assigned to its components and summarized by
// occupancy statistics, plus a nonparametric energy distance between sample
// sets.

// Hard assignment: argmax over components of log weight + log density.
// Ties resolve to the lowest component index.
std::vector<int> assign_components(const GmmModel& model, const Matrix& data);

// Occupancy histogram of hard assignments, one count per component.
std::vector<std::size_t> component_occupancy(const GmmModel& model, const Matrix& data);

// max(count) / max(1, min(count)). Throws if counts is empty or all zero.
double imbalance_ratio(const std::vector<std::size_t>& counts);

// Shannon entropy (nats) of the normalized occupancy histogram.
// Empty bins contribute zero. Throws if counts is empty or all zero.
double occupancy_entropy(const std::vector<std::size_t>& counts);

// Fraction of components whose occupancy share strictly exceeds threshold.
double mode_coverage(const std::vector<std::size_t>& counts, double threshold = 0.01);

// Energy distance between two samples (V-statistic, Euclidean norm):
//   2 E||X - Y|| - E||X - X'|| - E||Y - Y'||
// with expectations over all ordered pairs. Nonnegative, zero iff the
// empirical distributions coincide.
double energy_distance(const Matrix& x, const Matrix& y);

// BIC search over K = 1..k_cap that stops early once the score has risen for
// two consecutive candidates. Table rows cover every candidate tried.
SelectKResult search_components(const Matrix& data, int k_cap, const FitConfig& cfg);

struct ClusterabilityPoint {
    std::size_t start = 0;  // window offset into the descriptor sequence
    int k_star = 0;         // BIC-selected component count for this window
    std::vector<BicEntry> table;
};

// Sliding-window model selection: windows begin at 0, stride, 2*stride, ...
// while start + window <= data.size(). Throws if the window does not fit.
std::vector<ClusterabilityPoint> clusterability(const Matrix& data, std::size_t window,
                                                std::size_t stride,
                                                const std::vector<int>& k_values,
                                                const FitConfig& cfg);

}  // namespace mcm
