#pragma once

#include <string>
#include <vector>

#include "mcm/descriptor.hpp"

namespace mcm {

enum class MetricKind { Euclidean, Manhattan, Cosine, Mahalanobis };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

struct DistanceMetric {
    MetricKind kind = MetricKind::Euclidean;
    // Per-coordinate variances for Mahalanobis; each denominator gets
    // epsilon added as shrinkage. Ignored by the other metrics.
    std::vector<double> diag_cov;
    double epsilon = 1e-6;
};

// Distance between two descriptors of identical kind and dimension.
// Cosine distance is 1 - cosine similarity and rejects zero vectors.
double distance(const Descriptor& a, const Descriptor& b, const DistanceMetric& metric);

}  // namespace mcm
