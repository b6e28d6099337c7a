#include "mcm/pca.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mcm {

PcaResult fit_pca(const Matrix& data, int components) {
    if (data.empty()) throw std::invalid_argument("fit_pca: empty data");
    const std::size_t n = data.size();
    const std::size_t d = data.front().size();
    if (d == 0) throw std::invalid_argument("fit_pca: zero-dimensional data");
    for (const auto& row : data)
        if (row.size() != d) throw std::invalid_argument("fit_pca: ragged data");
    if (components < 1) throw std::invalid_argument("fit_pca: components must be >= 1");
    const int keep = std::min<int>(components, static_cast<int>(d));

    PcaResult out;
    out.mean.assign(d, 0.0);
    for (const auto& row : data)
        for (std::size_t j = 0; j < d; ++j) out.mean[j] += row[j];
    for (auto& v : out.mean) v /= static_cast<double>(n);

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
    Eigen::VectorXd centered(static_cast<Eigen::Index>(d));
    for (const auto& row : data) {
        for (std::size_t j = 0; j < d; ++j)
            centered[static_cast<Eigen::Index>(j)] = row[j] - out.mean[j];
        cov += centered * centered.transpose();
    }
    cov /= static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("fit_pca: eigensolver failed");

    // Eigenvalues come in ascending order; take the top ones.
    for (int c = 0; c < keep; ++c) {
        const Eigen::Index col = static_cast<Eigen::Index>(d) - 1 - c;
        Eigen::VectorXd axis = solver.eigenvectors().col(col);
        Eigen::Index arg = 0;
        axis.cwiseAbs().maxCoeff(&arg);
        if (axis[arg] < 0.0) axis = -axis;
        out.axes.emplace_back(axis.data(), axis.data() + axis.size());
        out.explained.push_back(solver.eigenvalues()[col]);
    }
    return out;
}

std::vector<double> pca_project(const PcaResult& pca, const std::vector<double>& x) {
    if (x.size() != pca.mean.size()) throw std::invalid_argument("pca_project: dimension mismatch");
    std::vector<double> out;
    out.reserve(pca.axes.size());
    for (const auto& axis : pca.axes) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) acc += axis[j] * (x[j] - pca.mean[j]);
        out.push_back(acc);
    }
    return out;
}

}  // namespace mcm
