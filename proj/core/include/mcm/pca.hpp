#pragma once

#include <vector>

#include "mcm/gmm.hpp"

namespace mcm {

// Principal axes for 2-D visualization of descriptor sets.
struct PcaResult {
    std::vector<double> mean;
    std::vector<std::vector<double>> axes;  // row per component, unit length
    std::vector<double> explained;          // eigenvalue per kept axis
};

// Fits up to `components` principal axes (clamped to the data dimension).
// Axis signs are fixed so the entry of largest magnitude is positive.
PcaResult fit_pca(const Matrix& data, int components = 2);

// Coordinates of x in the fitted axes.
std::vector<double> pca_project(const PcaResult& pca, const std::vector<double>& x);

}  // namespace mcm
