#include "mcm/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcm {

double Rng::unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::unit_open() {
    return 1.0 - unit();
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * unit();
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % n;
}

double Rng::normal(double mean, double stddev) {
    // Box-Muller, one value per call (no cached spare, keeps state replayable).
    const double u1 = unit_open();
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::laplace(double scale) {
    const double u = unit() - 0.5;
    const double sign = u < 0.0 ? -1.0 : 1.0;
    return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

double Rng::gamma(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("Rng::gamma: alpha must be positive");
    if (alpha < 1.0) {
        const double boost = std::pow(unit_open(), 1.0 / alpha);
        return gamma(alpha + 1.0) * boost;
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = unit_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> Rng::dirichlet(double alpha, std::size_t k) {
    if (k == 0) throw std::invalid_argument("Rng::dirichlet: k must be positive");
    std::vector<double> out(k);
    double sum = 0.0;
    for (auto& v : out) {
        v = gamma(alpha);
        sum += v;
    }
    if (sum <= 0.0) {
        // All gammas underflowed to zero (tiny alpha); fall back to a single spike.
        out.assign(k, 0.0);
        out[below(k)] = 1.0;
        return out;
    }
    for (auto& v : out) v /= sum;
    return out;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    // Partial Fisher-Yates: the first k slots end up with the sample.
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

Rng Rng::derive(std::uint64_t tag) const {
    return Rng(mix(seed_, tag));
}

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the combined value.
    std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace mcm
