#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mcm/distance.hpp"
#include "mcm/rng.hpp"

using namespace mcm;

namespace {

Descriptor desc(std::vector<double> v) {
    Descriptor d;
    d.values = std::move(v);
    return d;
}

Descriptor random_desc(Rng& rng, std::size_t dim) {
    Descriptor d;
    d.values.resize(dim);
    for (double& v : d.values) v = rng.unit() * 2.0 - 1.0;
    return d;
}

}  // namespace

TEST_SUITE("distance") {

TEST_CASE("frozen values on the unit square") {
    const Descriptor a = desc({0.0, 0.0});
    const Descriptor b = desc({1.0, 1.0});
    CHECK(distance(a, b, {MetricKind::Euclidean, {}, 1e-6}) ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(distance(a, b, {MetricKind::Manhattan, {}, 1e-6}) == doctest::Approx(2.0));
    // Orthogonal vectors: similarity 0, distance 1.
    CHECK(distance(desc({1.0, 0.0}), desc({0.0, 1.0}),
                   {MetricKind::Cosine, {}, 1e-6}) == doctest::Approx(1.0));
    // Parallel vectors: distance 0; opposite: distance 2.
    CHECK(distance(desc({2.0, 1.0}), desc({4.0, 2.0}),
                   {MetricKind::Cosine, {}, 1e-6}) == doctest::Approx(0.0));
    CHECK(distance(desc({1.0, 0.0}), desc({-3.0, 0.0}),
                   {MetricKind::Cosine, {}, 1e-6}) == doctest::Approx(2.0));
}

TEST_CASE("euclidean and manhattan match a direct loop") {
    Rng rng(201);
    for (int rep = 0; rep < 50; ++rep) {
        const Descriptor a = random_desc(rng, 6);
        const Descriptor b = random_desc(rng, 6);
        double sq = 0.0, abs = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            const double diff = a.values[i] - b.values[i];
            sq += diff * diff;
            abs += std::abs(diff);
        }
        CHECK(distance(a, b, {MetricKind::Euclidean, {}, 1e-6}) ==
              doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
        CHECK(distance(a, b, {MetricKind::Manhattan, {}, 1e-6}) ==
              doctest::Approx(abs).epsilon(1e-12));
    }
}

TEST_CASE("cosine matches a direct dot-product oracle") {
    Rng rng(202);
    for (int rep = 0; rep < 50; ++rep) {
        const Descriptor a = random_desc(rng, 8);
        const Descriptor b = random_desc(rng, 8);
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (std::size_t i = 0; i < 8; ++i) {
            dot += a.values[i] * b.values[i];
            na += a.values[i] * a.values[i];
            nb += b.values[i] * b.values[i];
        }
        const double expected = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
        CHECK(distance(a, b, {MetricKind::Cosine, {}, 1e-6}) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("cosine rejects zero vectors") {
    const Descriptor z = desc({0.0, 0.0, 0.0});
    const Descriptor v = desc({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(distance(z, v, {MetricKind::Cosine, {}, 1e-6}), std::domain_error);
    CHECK_THROWS_AS(distance(v, z, {MetricKind::Cosine, {}, 1e-6}), std::domain_error);
}

TEST_CASE("mahalanobis matches the shrunk per-coordinate formula") {
    Rng rng(203);
    for (int rep = 0; rep < 50; ++rep) {
        const Descriptor a = random_desc(rng, 5);
        const Descriptor b = random_desc(rng, 5);
        DistanceMetric m;
        m.kind = MetricKind::Mahalanobis;
        m.epsilon = 1e-6;
        m.diag_cov.resize(5);
        for (double& v : m.diag_cov) v = rng.unit() * 0.5;
        double acc = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const double diff = a.values[i] - b.values[i];
            acc += diff * diff / (m.diag_cov[i] + m.epsilon);
        }
        CHECK(distance(a, b, m) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
    }
}

TEST_CASE("mahalanobis with unit variances shrinks toward euclidean") {
    const Descriptor a = desc({0.2, 0.4, 0.6});
    const Descriptor b = desc({0.5, 0.1, 0.9});
    DistanceMetric m;
    m.kind = MetricKind::Mahalanobis;
    m.diag_cov = {1.0, 1.0, 1.0};
    m.epsilon = 1e-12;  // must stay positive; vanishing next to unit variance
    const double eu = distance(a, b, {MetricKind::Euclidean, {}, 1e-6});
    CHECK(distance(a, b, m) == doctest::Approx(eu).epsilon(1e-10));

    m.epsilon = 0.0;  // a zero epsilon is rejected outright
    CHECK_THROWS(distance(a, b, m));
}

TEST_CASE("mahalanobis requires a matching variance vector") {
    const Descriptor a = desc({0.0, 0.0});
    const Descriptor b = desc({1.0, 1.0});
    DistanceMetric m;
    m.kind = MetricKind::Mahalanobis;
    m.diag_cov = {1.0};  // wrong length
    CHECK_THROWS(distance(a, b, m));
    m.diag_cov.clear();
    CHECK_THROWS(distance(a, b, m));
}

TEST_CASE("dimension mismatch is rejected for every metric") {
    const Descriptor a = desc({1.0, 2.0});
    const Descriptor b = desc({1.0, 2.0, 3.0});
    for (MetricKind k : {MetricKind::Euclidean, MetricKind::Manhattan, MetricKind::Cosine})
        CHECK_THROWS(distance(a, b, {k, {}, 1e-6}));
}

TEST_CASE("metric properties hold on random inputs") {
    Rng rng(204);
    for (int rep = 0; rep < 30; ++rep) {
        const Descriptor a = random_desc(rng, 4);
        const Descriptor b = random_desc(rng, 4);
        for (MetricKind k : {MetricKind::Euclidean, MetricKind::Manhattan}) {
            const DistanceMetric m{k, {}, 1e-6};
            CHECK(distance(a, b, m) == doctest::Approx(distance(b, a, m)).epsilon(1e-12));
            CHECK(distance(a, b, m) >= 0.0);
            CHECK(distance(a, a, m) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("metric kinds round trip through strings") {
    for (MetricKind k : {MetricKind::Euclidean, MetricKind::Manhattan, MetricKind::Cosine,
                         MetricKind::Mahalanobis})
        CHECK(metric_kind_from_string(to_string(k)) == k);
    CHECK_THROWS(metric_kind_from_string("hamming"));
}

}  // TEST_SUITE
