#include "gazeheat/gp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "gazeheat/error.hpp"

namespace gazeheat {

double GpModel::kernel(const SparseVector& a, const SparseVector& b) const {
    return signal_sd_ * signal_sd_ *
           std::exp(-squared_distance(a, b) / (2.0 * length_scale_ * length_scale_));
}

GpModel GpModel::fit(const Dataset& data, const GpParams& params) {
    data.validate(Task::Regression);
    if (!(params.signal_sd > 0.0)) fail_usage("gp: signal_sd must be positive");
    if (!(params.noise_sd >= 0.0)) fail_usage("gp: noise_sd must be nonnegative");
    const std::size_t n = data.size();

    GpModel m;
    m.length_scale_ = params.length_scale > 0.0 ? params.length_scale : std::sqrt(static_cast<double>(data.dim));
    m.signal_sd_ = params.signal_sd;
    m.noise_sd_ = params.noise_sd;
    m.dim_ = data.dim;
    m.rows_ = data.rows;

    for (const auto& t : data.targets) {
        for (int c = 0; c < 4; ++c) m.mean_[c] += t[c];
    }
    for (auto& v : m.mean_) v /= static_cast<double>(n);

    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd k(ni, ni);
    const double noise = params.noise_sd * params.noise_sd;
    for (Eigen::Index i = 0; i < ni; ++i) {
        k(i, i) = m.kernel(m.rows_[i], m.rows_[i]) + noise;
        for (Eigen::Index j = i + 1; j < ni; ++j) {
            const double v = m.kernel(m.rows_[i], m.rows_[j]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    Eigen::MatrixXd y(ni, 4);
    for (Eigen::Index i = 0; i < ni; ++i) {
        for (int c = 0; c < 4; ++c) y(i, c) = data.targets[static_cast<std::size_t>(i)][c] - m.mean_[c];
    }

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        fail_data("gp: kernel matrix plus noise is not positive definite; adjust length_scale or noise_sd");
    }
    const Eigen::MatrixXd alpha = llt.solve(y);
    if (!alpha.allFinite()) fail_data("gp: solve produced non-finite weights");
    m.alpha_.resize(n);
    for (Eigen::Index i = 0; i < ni; ++i) {
        for (int c = 0; c < 4; ++c) m.alpha_[static_cast<std::size_t>(i)][c] = alpha(i, c);
    }
    return m;
}

GpModel GpModel::from_parts(std::vector<SparseVector> rows, std::vector<Target4> alpha, Target4 mean,
                            double length_scale, double signal_sd, double noise_sd, std::size_t dim) {
    if (rows.size() != alpha.size()) fail_data("gp: row and weight counts differ");
    if (!(length_scale > 0.0) || !(signal_sd > 0.0)) fail_data("gp: invalid kernel parameters");
    GpModel m;
    m.rows_ = std::move(rows);
    m.alpha_ = std::move(alpha);
    m.mean_ = mean;
    m.length_scale_ = length_scale;
    m.signal_sd_ = signal_sd;
    m.noise_sd_ = noise_sd;
    m.dim_ = dim;
    return m;
}

Target4 GpModel::predict_raw(const SparseVector& x) const {
    if (!x.index.empty() && x.index.back() >= dim_) fail_usage("gp: query dimension mismatch");
    Target4 out = mean_;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double k = kernel(rows_[i], x);
        for (int c = 0; c < 4; ++c) out[c] += k * alpha_[i][c];
    }
    return out;
}

Target4 GpModel::predict(const SparseVector& x) const {
    auto out = predict_raw(x);
    for (auto& v : out) v = std::clamp(v, 0.0, 1.0);
    return out;
}

std::string linear_algebra_version() {
    return "Eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION);
}

}  // namespace gazeheat
