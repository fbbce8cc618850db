#include <doctest.h>

#include <cmath>
#include <vector>

#include "gazeheat/error.hpp"
#include "gazeheat/random.hpp"
#include "gazeheat/svm.hpp"

using namespace gazeheat;

namespace {

Dataset make(const std::vector<std::vector<double>>& xs, const std::vector<int>& labels) {
    Dataset d;
    d.dim = xs.front().size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        d.rows.push_back(to_sparse(xs[i]));
        d.labels.push_back(labels[i]);
        d.targets.push_back({0.5, 0.5, 0.1, 0.1});
    }
    return d;
}

}  // namespace

TEST_CASE("two points: closed-form dual solution") {
    // With k = exp(-gamma d^2) between the points and C large enough,
    // alpha = 1 / (1 - k), bias 0, and the decision is 0 at the midpoint.
    const double gamma = 0.5;
    const auto d = make({{0.0, 0.0}, {1.0, 1.0}}, {1, 0});
    SvmParams p;
    p.c = 100.0;
    p.gamma = gamma;
    p.tol = 1e-9;
    const auto m = SvmModel::fit(d, p);
    CHECK(m.info().converged);
    const double k = std::exp(-gamma * 2.0);
    const double alpha = 1.0 / (1.0 - k);
    REQUIRE(m.support_vectors().size() == 2);
    for (double c : m.coefficients()) CHECK(std::abs(c) == doctest::Approx(alpha).epsilon(1e-6));
    CHECK(m.bias() == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(m.decision(to_sparse(std::vector<double>{0.5, 0.5})) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(m.decision(d.rows[0]) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.decision(d.rows[1]) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("box constraint binds when C is small") {
    const auto d = make({{0.0, 0.0}, {1.0, 1.0}}, {1, 0});
    SvmParams p;
    p.c = 0.2;
    p.gamma = 0.5;
    const auto m = SvmModel::fit(d, p);
    for (double c : m.coefficients()) CHECK(std::abs(c) == doctest::Approx(0.2));
}

TEST_CASE("XOR is separable with an RBF kernel") {
    const auto d = make({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {0, 0, 1, 1});
    SvmParams p;
    p.c = 10.0;
    p.gamma = 1.0;
    const auto m = SvmModel::fit(d, p);
    CHECK(m.info().converged);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(m.classify(d.rows[i]) == d.labels[i]);
}

TEST_CASE("dual feasibility on random problems") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Dataset d;
        d.dim = 4;
        for (int i = 0; i < 40; ++i) {
            std::vector<double> x(4);
            for (auto& v : x) v = rng.uniform();
            d.rows.push_back(to_sparse(x));
            d.labels.push_back(i % 2);
            d.targets.push_back({0.5, 0.5, 0.1, 0.1});
        }
        SvmParams p;
        p.c = rng.uniform(0.1, 5.0);
        const auto m = SvmModel::fit(d, p);
        double sum = 0.0;
        for (double c : m.coefficients()) {
            CHECK(std::abs(c) <= p.c * (1.0 + 1e-12));
            CHECK(c != 0.0);
            sum += c;
        }
        CHECK(std::abs(sum) < 1e-9);  // sum alpha_i y_i = 0
    }
}

TEST_CASE("default gamma and automatic gamma") {
    const auto d = make({{0, 0, 0, 0}, {1, 1, 1, 1}}, {0, 1});
    CHECK(SvmModel::fit(d).gamma() == 1.0);
    SvmParams p;
    p.gamma = 0.0;
    CHECK(SvmModel::fit(d, p).gamma() == doctest::Approx(0.25));
}

TEST_CASE("iteration cap is reported, not thrown") {
    Rng rng(3);
    Dataset d;
    d.dim = 2;
    for (int i = 0; i < 60; ++i) {
        d.rows.push_back(to_sparse(std::vector<double>{rng.uniform(), rng.uniform()}));
        d.labels.push_back(static_cast<int>(rng.below(2)));
        d.targets.push_back({0.5, 0.5, 0.1, 0.1});
    }
    SvmParams p;
    p.c = 1000.0;
    p.max_iter = 3;
    const auto m = SvmModel::fit(d, p);
    CHECK_FALSE(m.info().converged);
    CHECK(m.info().termination() == "max_iter");
    CHECK(m.info().iterations == 3);
}

TEST_CASE("invalid input") {
    CHECK_THROWS_AS(SvmModel::fit(make({{0.0}, {1.0}}, {1, 1})), Error);
    SvmParams p;
    p.c = 0.0;
    CHECK_THROWS_AS(SvmModel::fit(make({{0.0}, {1.0}}, {0, 1}), p), Error);
    const auto m = SvmModel::fit(make({{0.0}, {1.0}}, {0, 1}));
    SparseVector bad;
    bad.index = {4};
    bad.value = {1.0};
    CHECK_THROWS_AS(m.decision(bad), Error);
}
