#pragma once

#include <cstdint>
#include <vector>

#include "mcm/rng.hpp"

namespace mcm {

using Matrix = std::vector<std::vector<double>>;

// Diagonal-covariance Gaussian mixture.
struct GmmModel {
    int components = 0;
    int dim = 0;
    std::vector<double> weights;
    Matrix means;
    Matrix variances;            // per-component diagonal, floored
    double log_likelihood = 0.0; // of the training data at convergence
    std::vector<double> ll_history;  // one entry per EM iteration of the winning restart
};

struct FitConfig {
    int max_iter = 200;
    double tol = 1e-6;            // relative log-likelihood change
    double variance_floor = 1e-6;
    int restarts = 3;
    std::uint64_t seed = 0;
};

// k-means++ seeding: first centre uniform, each next one with probability
// proportional to squared distance from the nearest chosen centre.
Matrix kmeanspp_init(const Matrix& data, int k, Rng& rng);

// EM with log-sum-exp responsibilities; keeps the best of cfg.restarts runs.
GmmModel fit_em(const Matrix& data, int k, const FitConfig& cfg);

double log_likelihood(const GmmModel& model, const Matrix& data);

// Posterior component probabilities for one point.
std::vector<double> responsibilities(const GmmModel& model, const std::vector<double>& x);

// p * ln(n) - 2 * ln(L) with p = (K-1) + K*d + K*d. Lower is better.
double bic(const GmmModel& model, const Matrix& data);

struct BicEntry {
    int k = 0;
    double bic = 0.0;
    double log_likelihood = 0.0;
};

struct SelectKResult {
    int best_k = 0;
    GmmModel best_model;
    std::vector<BicEntry> table;
};

// Fits every candidate K and picks the BIC argmin; ties go to the smaller K.
SelectKResult select_k(const Matrix& data, const std::vector<int>& k_values,
                       const FitConfig& cfg);

}  // namespace mcm
