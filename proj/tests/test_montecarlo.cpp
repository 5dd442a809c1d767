#include <catch_amalgamated.hpp>

#include <cmath>

#include "errts/errors.hpp"
#include "errts/montecarlo.hpp"
#include "errts/naive.hpp"

using namespace errts;
using Catch::Approx;

namespace {

double max_rel_gap(const Eigen::MatrixXd& emp, const Eigen::MatrixXd& theory) {
    return ((emp - theory).array().abs() / theory.array().abs()).maxCoeff();
}

}  // namespace

TEST_CASE("simulate_ar") {
    const auto wn = simulate_ar({ArModel{5.0, {0.0}, 1.0}, 100000, 500, Innovation::Gaussian, 1});
    CHECK(mean_hat(wn) == Approx(5.0).margin(0.05));

    const auto ar1 = simulate_ar({ArModel{0.0, {0.5}, 1.0}, 100000, 500, Innovation::Gaussian, 2});
    CHECK(autocov_hat(ar1, 0) == Approx(4.0 / 3.0).margin(0.03));

    const SimSpec spec{ArModel{1.0, {0.3, 0.2}, 2.0}, 300, 100, Innovation::Gaussian, 9};
    const auto a = simulate_ar(spec), b = simulate_ar(spec);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    CHECK(a.size() == 300);

    CHECK_THROWS_AS(simulate_ar({ArModel{0.0, {1.0}, 1.0}, 100, 10, Innovation::Gaussian, 1}), ModelError);
}

TEST_CASE("burn-in length does not shift the simulated mean") {
    double m500 = 0.0, m1000 = 0.0;
    for (std::uint64_t r = 0; r < 200; ++r) {
        m500 += simulate_ar({ArModel{1.0, {0.9}, 1.0}, 50, 500, Innovation::Gaussian, r}).values()[0];
        m1000 += simulate_ar({ArModel{1.0, {0.9}, 1.0}, 50, 1000, Innovation::Gaussian, r + 1000}).values()[0];
    }
    // First retained value has sd sqrt(1/0.19) ~ 2.3; 200 replicates give SE ~ 0.16.
    CHECK(std::abs(m500 / 200 - 10.0) < 0.5);
    CHECK(std::abs(m1000 / 200 - 10.0) < 0.5);
}

TEST_CASE("naive limit experiments") {
    const SimSpec spec{ArModel{1.0, {0.5}, 1.0}, 5000, 500, Innovation::Gaussian, 0};
    SECTION("identity error recovers the truth") {
        const auto ex = naive_limit_experiment(spec, identity_error(), 60, 4);
        CHECK(ex.naive.mean[0] == Approx(1.0).margin(0.03));
        CHECK(ex.naive.mean[1] == Approx(0.5).margin(0.01));
        CHECK(ex.naive.mean[2] == Approx(1.0).margin(0.02));
        CHECK(ex.corrected_failures == 0);
    }
    SECTION("agreement with the additive limit") {
        const AdditiveError err{0.0, 1.0, 1.0};
        const auto ex = naive_limit_experiment(spec, err, 100, 5);
        const double target = naive_limit_ar1_additive(spec.model, err).phi_star[0];
        CHECK(std::abs(ex.naive.mean[1] - target) < 2.5 * ex.naive.sd[1] / std::sqrt(100.0) + 1e-3);
    }
    SECTION("attenuation grows with sigma_u2") {
        const double beta0 = scale_from_asymptomatic_rate(kDefaultAsymptomaticRate);
        const auto a = naive_limit_experiment(spec, MultiplicativeError{beta0, 0.3}, 60, 6);
        const auto b = naive_limit_experiment(spec, MultiplicativeError{beta0, 0.6}, 60, 6);
        CHECK(a.naive.mean[1] < 0.5);
        CHECK(b.naive.mean[1] < a.naive.mean[1]);
    }
    SECTION("reproducible") {
        const auto a = naive_limit_experiment(spec, AdditiveError{0.0, 1.0, 0.5}, 50, 8);
        const auto b = naive_limit_experiment(spec, AdditiveError{0.0, 1.0, 0.5}, 50, 8);
        CHECK(a.naive.mean == b.naive.mean);
        CHECK(a.corrected.sd == b.corrected.sd);
    }
    CHECK_THROWS_AS(naive_limit_experiment(spec, identity_error(), 10, 1), ModelError);
}

TEST_CASE("covariance experiments match the asymptotic Q matrices") {
    const SimSpec spec{ArModel{1.0, {0.5}, 1.0}, 2000, 500, Innovation::Gaussian, 0};
    SECTION("error-free") {
        const auto emp = covariance_experiment(spec, identity_error(), 5000, 11);
        CHECK(max_rel_gap(emp, bartlett_matrix(spec.model, 1)) < 0.05);
    }
    SECTION("additive") {
        const AdditiveError err{0.0, 1.0, 1.0};
        const auto emp = covariance_experiment(spec, err, 5000, 12);
        CHECK(max_rel_gap(emp, q1_matrix(spec.model, err, 1)) < 0.07);
    }
    SECTION("multiplicative") {
        const MultiplicativeError err{2.0, 0.5};
        const auto emp = covariance_experiment(spec, err, 5000, 13);
        CHECK(max_rel_gap(emp, q2_matrix(spec.model, err, gaussian_moments(spec.model, 1), 1)) < 0.10);
    }
    SECTION("reproducible and checked") {
        const auto a = covariance_experiment(spec, identity_error(), 1000, 3);
        const auto b = covariance_experiment(spec, identity_error(), 1000, 3);
        CHECK(a == b);
        CHECK_THROWS_AS(covariance_experiment(spec, identity_error(), 999, 3), ModelError);
    }
}

TEST_CASE("summarize_rows") {
    const auto m = summarize_rows({{1.0, 2.0}, {3.0, 2.0}});
    CHECK(m.mean == std::vector<double>{2.0, 2.0});
    CHECK(m.sd[0] == Approx(std::sqrt(2.0)));
    CHECK(m.sd[1] == 0.0);
    CHECK(summarize_rows({}).count == 0);
}
