#include <doctest.h>

#include <cmath>
#include <vector>

#include "gazeheat/error.hpp"
#include "gazeheat/gp.hpp"
#include "gazeheat/random.hpp"

using namespace gazeheat;

namespace {

Dataset random_problem(Rng& rng, std::size_t n, std::size_t dim) {
    Dataset d;
    d.dim = dim;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(dim);
        for (auto& v : x) v = rng.uniform();
        d.rows.push_back(to_sparse(x));
        d.labels.push_back(1);
        d.targets.push_back({rng.uniform(), rng.uniform(), rng.uniform(0.05, 0.5), rng.uniform(0.05, 0.5)});
    }
    return d;
}

double rbf(const std::vector<double>& a, const std::vector<double>& b, double ell, double sf) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return sf * sf * std::exp(-s / (2.0 * ell * ell));
}

// Gaussian elimination with partial pivoting on a dense copy.
std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        }
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

Target4 oracle(const Dataset& d, const GpParams& p, const std::vector<double>& q) {
    const std::size_t n = d.size();
    const double ell = p.length_scale > 0 ? p.length_scale : std::sqrt(static_cast<double>(d.dim));
    std::vector<std::vector<double>> xs;
    for (const auto& r : d.rows) xs.push_back(to_dense(r, d.dim));
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) k[i][j] = rbf(xs[i], xs[j], ell, p.signal_sd);
        k[i][i] += p.noise_sd * p.noise_sd;
    }
    Target4 out{};
    for (int c = 0; c < 4; ++c) {
        double mean = 0.0;
        for (const auto& t : d.targets) mean += t[c];
        mean /= static_cast<double>(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = d.targets[i][c] - mean;
        const auto alpha = solve(k, y);
        double s = mean;
        for (std::size_t i = 0; i < n; ++i) s += rbf(q, xs[i], ell, p.signal_sd) * alpha[i];
        out[c] = s;
    }
    return out;
}

}  // namespace

TEST_CASE("posterior mean matches a dense linear solve") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + rng.below(20);
        const std::size_t dim = 1 + rng.below(6);
        const auto d = random_problem(rng, n, dim);
        GpParams p;
        p.length_scale = trial % 2 ? 0.0 : rng.uniform(0.2, 2.0);
        p.signal_sd = rng.uniform(0.5, 2.0);
        p.noise_sd = rng.uniform(0.05, 0.5);
        const auto m = GpModel::fit(d, p);
        for (int q = 0; q < 3; ++q) {
            std::vector<double> x(dim);
            for (auto& v : x) v = rng.uniform();
            const auto want = oracle(d, p, x);
            const auto got = m.predict_raw(to_sparse(x));
            for (int c = 0; c < 4; ++c) CHECK(std::abs(got[c] - want[c]) < 1e-8);
        }
    }
}

TEST_CASE("near-noiseless fit interpolates the training targets") {
    Rng rng(5);
    const auto d = random_problem(rng, 8, 3);
    GpParams p;
    p.length_scale = 0.5;
    p.noise_sd = 1e-4;
    const auto m = GpModel::fit(d, p);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto got = m.predict_raw(d.rows[i]);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(got[c] - d.targets[i][c]) < 1e-4);
    }
}

TEST_CASE("far from the data the prediction reverts to the training mean") {
    Rng rng(6);
    const auto d = random_problem(rng, 10, 2);
    const auto m = GpModel::fit(d, {0.5, 1.0, 0.1});
    const auto got = m.predict_raw(to_sparse(std::vector<double>{50.0, 50.0}));
    for (int c = 0; c < 4; ++c) CHECK(std::abs(got[c] - m.mean()[c]) < 1e-3);
}

TEST_CASE("prediction is linear in the targets") {
    Rng rng(7);
    const auto a = random_problem(rng, 12, 3);
    auto b = a;
    auto sum = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int c = 0; c < 4; ++c) {
            b.targets[i][c] = rng.uniform();
            sum.targets[i][c] = 2.0 * a.targets[i][c] + 3.0 * b.targets[i][c];
        }
    }
    const GpParams p{0.8, 1.0, 0.2};
    const auto ma = GpModel::fit(a, p), mb = GpModel::fit(b, p), ms = GpModel::fit(sum, p);
    for (int q = 0; q < 10; ++q) {
        const auto x = to_sparse(std::vector<double>{rng.uniform(), rng.uniform(), rng.uniform()});
        const auto pa = ma.predict_raw(x), pb = mb.predict_raw(x), ps = ms.predict_raw(x);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(ps[c] - (2.0 * pa[c] + 3.0 * pb[c])) < 1e-8);
    }
}

TEST_CASE("clamped prediction stays in the unit interval") {
    Rng rng(8);
    auto d = random_problem(rng, 10, 2);
    for (auto& t : d.targets) t = {1.0, 0.0, 1.0, 0.0};
    d.targets[0] = {0.9, 0.1, 0.9, 0.1};
    const auto m = GpModel::fit(d, {0.3, 1.0, 0.01});
    for (int q = 0; q < 50; ++q) {
        const auto p = m.predict(to_sparse(std::vector<double>{rng.uniform(), rng.uniform()}));
        for (double v : p) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("singular kernel matrix is a data error") {
    Dataset d;
    d.dim = 2;
    for (int i = 0; i < 2; ++i) {
        d.rows.push_back(to_sparse(std::vector<double>{0.3, 0.7}));
        d.labels.push_back(1);
        d.targets.push_back({0.1 * (i + 1), 0.2, 0.3, 0.4});
    }
    try {
        GpModel::fit(d, {1.0, 1.0, 0.0});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Data);
    }
}
