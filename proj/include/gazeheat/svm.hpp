#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gazeheat/dataset.hpp"

namespace gazeheat {

struct SvmParams {
    double c = 1.0;
    double gamma = 1.0;  // <= 0 selects 1 / dim
    double tol = 1e-3;
    std::int64_t max_iter = 100000;
};

struct SvmFitInfo {
    std::int64_t iterations = 0;
    bool converged = false;
    double kkt_gap = 0.0;  // maximal violating pair gap at exit

    std::string termination() const { return converged ? "kkt_tolerance" : "max_iter"; }
};

// Binary soft-margin SVM with kernel k(a, b) = exp(-gamma * |a - b|^2),
// trained by sequential minimal optimization on the dual with second-order
// working-set selection. Class 1 maps to +1, class 0 to -1.
class SvmModel {
public:
    // Throws a Usage error if only one class is present. Non-convergence is
    // reported through info(), the model is still usable.
    static SvmModel fit(const Dataset& data, const SvmParams& params = {});

    double decision(const SparseVector& x) const;
    int classify(const SparseVector& x) const { return decision(x) > 0.0 ? 1 : 0; }

    const SvmFitInfo& info() const noexcept { return info_; }
    double gamma() const noexcept { return gamma_; }
    double c() const noexcept { return c_; }
    double bias() const noexcept { return bias_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<SparseVector>& support_vectors() const noexcept { return sv_; }
    // alpha_i * y_i per support vector
    const std::vector<double>& coefficients() const noexcept { return coef_; }

    static SvmModel from_parts(std::vector<SparseVector> sv, std::vector<double> coef, double bias, double gamma,
                               double c, std::size_t dim, SvmFitInfo info = {});

private:
    std::vector<SparseVector> sv_;
    std::vector<double> coef_;
    double bias_ = 0.0;
    double gamma_ = 1.0;
    double c_ = 1.0;
    std::size_t dim_ = 0;
    SvmFitInfo info_;
};

}  // namespace gazeheat
