#include "gazeheat/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gazeheat/error.hpp"

namespace gazeheat {

namespace {
constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

SvmModel SvmModel::fit(const Dataset& data, const SvmParams& params) {
    data.validate(Task::Classification);
    if (!(params.c > 0.0)) fail_usage("svm: C must be positive");
    if (!(params.tol > 0.0)) fail_usage("svm: tol must be positive");
    if (params.max_iter < 1) fail_usage("svm: max_iter must be positive");
    const std::size_t n = data.size();
    const double gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(data.dim);
    const double c = params.c;

    std::vector<double> y(n);
    bool seen[2] = {false, false};
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = data.labels[i] == 1 ? 1.0 : -1.0;
        seen[data.labels[i]] = true;
    }
    if (!seen[0] || !seen[1]) fail_usage("svm: training data must contain both classes");

    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kernel[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::exp(-gamma * squared_distance(data.rows[i], data.rows[j]));
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }
    auto K = [&](std::size_t i, std::size_t j) { return kernel[i * n + j]; };

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a
    auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0); };
    auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < c); };

    SvmFitInfo info;
    while (true) {
        double gmax = -kInf;
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (in_up(t) && -y[t] * grad[t] > gmax) {
                gmax = -y[t] * grad[t];
                i = t;
            }
        }
        double gmin = kInf;
        double best_obj = kInf;
        std::size_t j = n;
        if (i < n) {
            for (std::size_t t = 0; t < n; ++t) {
                if (!in_low(t)) continue;
                const double v = -y[t] * grad[t];
                gmin = std::min(gmin, v);
                const double b = gmax - v;
                if (b > 0.0) {
                    double a = K(i, i) + K(t, t) - 2.0 * K(i, t);
                    if (a <= 0.0) a = kTau;
                    const double obj = -(b * b) / a;
                    if (obj < best_obj) {
                        best_obj = obj;
                        j = t;
                    }
                }
            }
        }
        info.kkt_gap = gmax - gmin;
        if (i == n || j == n || info.kkt_gap <= params.tol) {
            info.converged = true;
            break;
        }
        if (info.iterations >= params.max_iter) break;
        ++info.iterations;

        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
        if (quad <= 0.0) quad = kTau;
        // Two-variable subproblem, clipped to the box (LIBSVM formulation).
        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_ai;
        const double dj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += y[t] * (y[i] * K(t, i) * di + y[j] * K(t, j) * dj);
        }
    }

    // Bias from free vectors; bracket midpoint when none are free.
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double ub = kInf, lb = -kInf;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0) {
            if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

    std::vector<SparseVector> sv;
    std::vector<double> coef;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            sv.push_back(data.rows[t]);
            coef.push_back(alpha[t] * y[t]);
        }
    }
    return from_parts(std::move(sv), std::move(coef), -rho, gamma, c, data.dim, info);
}

SvmModel SvmModel::from_parts(std::vector<SparseVector> sv, std::vector<double> coef, double bias, double gamma,
                              double c, std::size_t dim, SvmFitInfo info) {
    if (sv.size() != coef.size()) fail_data("svm: support vector and coefficient counts differ");
    SvmModel m;
    m.sv_ = std::move(sv);
    m.coef_ = std::move(coef);
    m.bias_ = bias;
    m.gamma_ = gamma;
    m.c_ = c;
    m.dim_ = dim;
    m.info_ = info;
    return m;
}

double SvmModel::decision(const SparseVector& x) const {
    if (!x.index.empty() && x.index.back() >= dim_) fail_usage("svm: query dimension mismatch");
    double f = bias_;
    for (std::size_t i = 0; i < sv_.size(); ++i) f += coef_[i] * std::exp(-gamma_ * squared_distance(sv_[i], x));
    return f;
}

}  // namespace gazeheat
