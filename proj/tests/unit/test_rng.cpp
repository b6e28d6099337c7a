#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "mcm/rng.hpp"

using namespace mcm;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the sequence, different seeds diverge") {
    Rng a(123), b(123), c(124);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.unit();
        all_equal = all_equal && va == b.unit();
        any_diff = any_diff || va != c.unit();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("unit stays in [0,1) and looks uniform") {
    Rng rng(7);
    std::vector<int> bins(8, 0);
    for (int i = 0; i < 40000; ++i) {
        const double u = rng.unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        bins[static_cast<int>(u * 8)] += 1;
    }
    const auto [mn, mx] = std::minmax_element(bins.begin(), bins.end());
    CHECK(static_cast<double>(*mx) / *mn < 1.2);
}

TEST_CASE("below covers the range without bias") {
    Rng rng(11);
    std::vector<int> bins(5, 0);
    for (int i = 0; i < 20000; ++i) {
        const std::uint64_t v = rng.below(5);
        REQUIRE(v < 5);
        bins[v] += 1;
    }
    const auto [mn, mx] = std::minmax_element(bins.begin(), bins.end());
    CHECK(static_cast<double>(*mx) / *mn < 1.2);
}

TEST_CASE("normal has unit scale") {
    Rng rng(13);
    double sum = 0.0, sq = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.05);
}

TEST_CASE("laplace variance is twice the squared scale") {
    Rng rng(17);
    const double b = 0.7;
    double sum = 0.0, sq = 0.0;
    const int n = 60000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.laplace(b);
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(sq / n - mean * mean - 2.0 * b * b) < 0.08);
}

TEST_CASE("gamma matches its mean and variance") {
    Rng rng(19);
    for (double alpha : {0.4, 1.0, 2.5}) {
        double sum = 0.0, sq = 0.0;
        const int n = 60000;
        for (int i = 0; i < n; ++i) {
            const double v = rng.gamma(alpha);
            REQUIRE(v >= 0.0);
            sum += v;
            sq += v * v;
        }
        const double mean = sum / n;
        CHECK(std::abs(mean - alpha) < 0.05 * std::max(1.0, alpha));
        CHECK(std::abs(sq / n - mean * mean - alpha) < 0.12 * std::max(1.0, alpha));
    }
}

TEST_CASE("dirichlet draws are simplex points") {
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<double> w = rng.dirichlet(0.3, 7);
        REQUIRE(w.size() == 7);
        double total = 0.0;
        for (double v : w) {
            REQUIRE(v >= 0.0);
            total += v;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("shuffle permutes in place") {
    Rng rng(29);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> shuffled = v;
    rng.shuffle(shuffled);
    CHECK(shuffled != v);  // 50! makes identity vanishingly unlikely
    std::vector<int> sorted = shuffled;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == v);
}

TEST_CASE("sample_without_replacement yields distinct indices") {
    Rng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        const auto picks = rng.sample_without_replacement(20, 8);
        REQUIRE(picks.size() == 8);
        std::set<std::size_t> seen(picks.begin(), picks.end());
        CHECK(seen.size() == 8);
        for (std::size_t p : picks) CHECK(p < 20);
    }
    const auto all = rng.sample_without_replacement(5, 5);
    std::set<std::size_t> seen(all.begin(), all.end());
    CHECK(seen.size() == 5);
}

TEST_CASE("derive and mix give stable distinct streams") {
    CHECK(Rng::mix(1, 2) == Rng::mix(1, 2));
    CHECK(Rng::mix(1, 2) != Rng::mix(1, 3));
    CHECK(Rng::mix(1, 2) != Rng::mix(2, 2));
    Rng rng(5);
    Rng d1 = rng.derive(10);
    Rng d2 = rng.derive(10);
    // Deriving with the same tag from the same parent state is stable.
    CHECK(d1.unit() == d2.unit());
}

}  // TEST_SUITE
