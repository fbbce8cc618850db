#pragma once

#include <string>
#include <vector>

#include "gazeheat/dataset.hpp"

namespace gazeheat {

struct GpParams {
    double length_scale = 0.0;  // <= 0 selects sqrt(dim)
    double signal_sd = 1.0;
    double noise_sd = 0.1;
};

// Posterior-mean Gaussian process regression, one independent GP per box
// parameter sharing a squared-exponential kernel
//   k(a, b) = signal_sd^2 * exp(-|a - b|^2 / (2 * length_scale^2)).
// Targets are centred on their training mean before solving
// (K + noise_sd^2 I) alpha = y - mean.
class GpModel {
public:
    // Throws a Data error when the noisy kernel matrix is not positive definite.
    static GpModel fit(const Dataset& data, const GpParams& params = {});

    // Posterior mean, unclamped. Linear in the training targets.
    Target4 predict_raw(const SparseVector& x) const;
    // Posterior mean clamped into [0, 1].
    Target4 predict(const SparseVector& x) const;

    double length_scale() const noexcept { return length_scale_; }
    double signal_sd() const noexcept { return signal_sd_; }
    double noise_sd() const noexcept { return noise_sd_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<SparseVector>& rows() const noexcept { return rows_; }
    const std::vector<Target4>& weights() const noexcept { return alpha_; }
    const Target4& mean() const noexcept { return mean_; }

    static GpModel from_parts(std::vector<SparseVector> rows, std::vector<Target4> alpha, Target4 mean,
                              double length_scale, double signal_sd, double noise_sd, std::size_t dim);

private:
    double kernel(const SparseVector& a, const SparseVector& b) const;

    std::vector<SparseVector> rows_;
    std::vector<Target4> alpha_;
    Target4 mean_{};
    double length_scale_ = 1.0;
    double signal_sd_ = 1.0;
    double noise_sd_ = 0.1;
    std::size_t dim_ = 0;
};

// Version of the linear algebra backend, for run manifests.
std::string linear_algebra_version();

}  // namespace gazeheat
