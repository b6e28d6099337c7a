#include <doctest.h>

#include <cmath>
#include <vector>

#include "mcm/diagnostics.hpp"
#include "mcm/rng.hpp"

using namespace mcm;

namespace {

Matrix blob(Rng& rng, std::size_t n, const std::vector<double>& mean, double sd) {
    Matrix out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(mean.size());
        for (std::size_t d = 0; d < mean.size(); ++d) row[d] = mean[d] + sd * rng.normal();
        out.push_back(std::move(row));
    }
    return out;
}

GmmModel two_component_line() {
    GmmModel m;
    m.components = 2;
    m.dim = 1;
    m.weights = {0.5, 0.5};
    m.means = {{0.0}, {2.0}};
    m.variances = {{0.5}, {0.5}};
    return m;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("hard assignment picks the maximum posterior, ties to the low index") {
    const GmmModel m = two_component_line();
    const Matrix data = {{-0.5}, {0.2}, {1.9}, {2.6}, {1.0}};
    const auto a = assign_components(m, data);
    REQUIRE(a.size() == 5);
    CHECK(a[0] == 0);
    CHECK(a[1] == 0);
    CHECK(a[2] == 1);
    CHECK(a[3] == 1);
    CHECK(a[4] == 0);  // exact midpoint ties, lowest index wins
}

TEST_CASE("assignment follows the weights when densities tie") {
    GmmModel m = two_component_line();
    m.weights = {0.2, 0.8};
    const auto a = assign_components(m, {{1.0}});
    CHECK(a[0] == 1);
}

TEST_CASE("occupancy counts the assignments per component") {
    const GmmModel m = two_component_line();
    const Matrix data = {{-0.5}, {0.2}, {1.9}, {2.6}, {3.0}};
    const auto counts = component_occupancy(m, data);
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] == 2);
    CHECK(counts[1] == 3);
}

TEST_CASE("imbalance ratio frozen cases") {
    CHECK(imbalance_ratio({30, 15, 2}) == doctest::Approx(15.0));
    CHECK(imbalance_ratio({30, 0, 15}) == doctest::Approx(30.0));  // min clamps to 1
    CHECK(imbalance_ratio({7}) == doctest::Approx(1.0));
    CHECK(imbalance_ratio({4, 4, 4}) == doctest::Approx(1.0));
    CHECK_THROWS(imbalance_ratio({}));
    CHECK_THROWS(imbalance_ratio({0, 0}));
}

TEST_CASE("occupancy entropy frozen cases") {
    // Uniform over 20 bins: ln 20.
    std::vector<std::size_t> uniform(20, 5);
    CHECK(occupancy_entropy(uniform) == doctest::Approx(2.995732273553991).epsilon(1e-14));
    // {3, 1}: -(0.75 ln 0.75 + 0.25 ln 0.25).
    CHECK(occupancy_entropy({3, 1}) == doctest::Approx(0.5623351446188084).epsilon(1e-14));
    // Empty bins contribute nothing; a point mass has zero entropy.
    CHECK(occupancy_entropy({5, 0, 0}) == doctest::Approx(0.0));
    CHECK_THROWS(occupancy_entropy({}));
    CHECK_THROWS(occupancy_entropy({0}));
}

TEST_CASE("mode coverage counts shares strictly above the threshold") {
    // Shares 0.50, 0.49, 0.01: the exact-threshold bin does not count.
    CHECK(mode_coverage({50, 49, 1}, 0.01) == doctest::Approx(2.0 / 3.0));
    CHECK(mode_coverage({10, 10, 10, 10}, 0.01) == doctest::Approx(1.0));
    CHECK(mode_coverage({100, 0}, 0.01) == doctest::Approx(0.5));
    CHECK_THROWS(mode_coverage({}, 0.01));
}

TEST_CASE("energy distance frozen point-mass cases") {
    // Point masses at distance d: 2d - 0 - 0.
    CHECK(energy_distance({{0.0}}, {{1.0}}) == doctest::Approx(2.0));
    CHECK(energy_distance({{0.0, 0.0}}, {{3.0, 4.0}}) == doctest::Approx(10.0));
    // Identical samples: zero.
    const Matrix x = {{0.1, 0.2}, {0.7, 0.4}, {0.3, 0.9}};
    CHECK(energy_distance(x, x) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("energy distance matches the double-loop oracle and is symmetric") {
    Rng rng(501);
    const Matrix x = blob(rng, 17, {0.0, 0.0}, 1.0);
    const Matrix y = blob(rng, 23, {0.8, -0.3}, 0.7);
    auto norm = [](const std::vector<double>& a, const std::vector<double>& b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(acc);
    };
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (const auto& a : x)
        for (const auto& b : y) xy += norm(a, b);
    for (const auto& a : x)
        for (const auto& b : x) xx += norm(a, b);
    for (const auto& a : y)
        for (const auto& b : y) yy += norm(a, b);
    const double expected = 2.0 * xy / (x.size() * y.size()) -
                            xx / (x.size() * x.size()) - yy / (y.size() * y.size());
    CHECK(energy_distance(x, y) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(energy_distance(y, x) == doctest::Approx(energy_distance(x, y)).epsilon(1e-12));
    CHECK(energy_distance(x, y) >= 0.0);
}

TEST_CASE("energy distance separates shifted distributions monotonically") {
    Rng rng(502);
    const Matrix x = blob(rng, 60, {0.0}, 0.5);
    const Matrix near = blob(rng, 60, {0.3}, 0.5);
    const Matrix far = blob(rng, 60, {3.0}, 0.5);
    CHECK(energy_distance(x, far) > energy_distance(x, near));
}

TEST_CASE("energy distance validates shapes") {
    CHECK_THROWS(energy_distance({}, {{1.0}}));
    CHECK_THROWS(energy_distance({{1.0}}, {}));
    CHECK_THROWS(energy_distance({{1.0, 2.0}}, {{1.0}}));
}

TEST_CASE("component search stops after two consecutive bic rises") {
    Rng rng(503);
    // One tight blob: K=1 wins, 2 and 3 rise, so 4+ are never fitted.
    const Matrix data = blob(rng, 300, {0.0, 0.0}, 0.2);
    FitConfig cfg;
    cfg.restarts = 2;
    cfg.seed = 9;
    const SelectKResult res = search_components(data, 8, cfg);
    CHECK(res.best_k == 1);
    CHECK(res.table.size() >= 3);
    CHECK(res.table.size() < 8);
    // Confirm the early-stop shape: the last two rows rise monotonically
    // above the winner.
    const double best = res.table[res.best_k - 1].bic;
    const std::size_t n = res.table.size();
    CHECK(res.table[n - 1].bic > res.table[n - 2].bic);
    CHECK(res.table[n - 2].bic > best);
    CHECK_THROWS(search_components(data, 0, cfg));
}

TEST_CASE("component search scans the full range when bic keeps improving") {
    Rng rng(504);
    Matrix data;
    for (int m = 0; m < 3; ++m) {
        const Matrix b = blob(rng, 120, {3.0 * m, 0.5 * m}, 0.15);
        data.insert(data.end(), b.begin(), b.end());
    }
    FitConfig cfg;
    cfg.restarts = 2;
    cfg.seed = 13;
    const SelectKResult res = search_components(data, 6, cfg);
    CHECK(res.best_k == 3);
}

TEST_CASE("clusterability slides windows while they fit") {
    Rng rng(505);
    // 100 near points then 100 far points, window 80, stride 60: windows at
    // 0, 60, 120 (180 + 80 would overrun 200, wait: 120 + 80 = 200 fits).
    Matrix data = blob(rng, 100, {0.0}, 0.2);
    const Matrix far = blob(rng, 100, {4.0}, 0.2);
    data.insert(data.end(), far.begin(), far.end());

    FitConfig cfg;
    cfg.restarts = 2;
    cfg.seed = 21;
    const auto pts = clusterability(data, 80, 60, {1, 2, 3}, cfg);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].start == 0);
    CHECK(pts[1].start == 60);
    CHECK(pts[2].start == 120);
    for (const auto& p : pts) REQUIRE(p.table.size() == 3);
    // Pure windows look unimodal; the straddling window splits in two.
    CHECK(pts[0].k_star == 1);
    CHECK(pts[1].k_star == 2);
    CHECK(pts[2].k_star >= 1);  // mostly far points plus a few near ones

    CHECK_THROWS(clusterability(data, 300, 60, {1, 2}, cfg));  // window too large
    CHECK_THROWS(clusterability(data, 0, 60, {1, 2}, cfg));
    CHECK_THROWS(clusterability(data, 80, 0, {1, 2}, cfg));
}

}  // TEST_SUITE
