#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mcm {

// Seeded generator with self-contained sampling routines. The std::mt19937_64
// engine is fully specified by the standard; the distribution helpers are
// implemented here (rather than via <random> distribution objects, which are
// implementation-defined) so that a (config, seed) pair yields identical
// output bytes on any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double unit();
    // Uniform in (0, 1].
    double unit_open();
    double uniform(double lo, double hi);
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    double normal(double mean = 0.0, double stddev = 1.0);
    double laplace(double scale);
    // Marsaglia-Tsang; alpha > 0.
    double gamma(double alpha);
    std::vector<double> dirichlet(double alpha, std::size_t k);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices drawn uniformly from [0, n); order is random.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    // Independent generator for a named sub-purpose of the same run.
    Rng derive(std::uint64_t tag) const;

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace mcm
