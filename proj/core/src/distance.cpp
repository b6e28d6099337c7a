#include "mcm/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::Manhattan: return "manhattan";
        case MetricKind::Cosine: return "cosine";
        case MetricKind::Mahalanobis: return "mahalanobis";
    }
    throw std::logic_error("unknown MetricKind");
}

MetricKind metric_kind_from_string(const std::string& name) {
    if (name == "euclidean") return MetricKind::Euclidean;
    if (name == "manhattan") return MetricKind::Manhattan;
    if (name == "cosine") return MetricKind::Cosine;
    if (name == "mahalanobis") return MetricKind::Mahalanobis;
    throw std::invalid_argument("unknown metric: " + name);
}

double distance(const Descriptor& a, const Descriptor& b, const DistanceMetric& metric) {
    if (a.kind != b.kind) throw std::invalid_argument("distance: descriptor kinds differ");
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("distance: descriptor dimensions differ");
    const std::size_t n = a.values.size();
    switch (metric.kind) {
        case MetricKind::Euclidean: {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = a.values[i] - b.values[i];
                acc += d * d;
            }
            return std::sqrt(acc);
        }
        case MetricKind::Manhattan: {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += std::abs(a.values[i] - b.values[i]);
            return acc;
        }
        case MetricKind::Cosine: {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dot += a.values[i] * b.values[i];
                na += a.values[i] * a.values[i];
                nb += b.values[i] * b.values[i];
            }
            if (na == 0.0 || nb == 0.0)
                throw std::domain_error("distance: cosine undefined for zero vector");
            return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
        }
        case MetricKind::Mahalanobis: {
            if (metric.diag_cov.size() != n)
                throw std::invalid_argument("distance: mahalanobis covariance dimension mismatch");
            if (!(metric.epsilon > 0.0))
                throw std::invalid_argument("distance: mahalanobis epsilon must be positive");
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = a.values[i] - b.values[i];
                acc += d * d / (metric.diag_cov[i] + metric.epsilon);
            }
            return std::sqrt(acc);
        }
    }
    throw std::logic_error("unknown MetricKind");
}

}  // namespace mcm
