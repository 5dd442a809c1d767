#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "errts/corrected.hpp"
#include "errts/errors.hpp"
#include "errts/estimation.hpp"
#include "errts/naive.hpp"
#include "support.hpp"

using namespace errts;
using Catch::Approx;

TEST_CASE("corrected moments") {
    const AutocovSummary s{3.0, {1.833, 0.9, 0.4}};
    const auto same = corrected_moments(s, identity_error());
    CHECK(same.mu_hat == s.mu_hat);
    CHECK(same.gammas == s.gammas);

    const auto add = corrected_moments(s, AdditiveError{0.0, 1.0, 0.5});
    CHECK(add.gammas[0] == Approx(1.333));
    CHECK(add.gammas[1] == Approx(0.9));

    const auto shifted = corrected_moments(s, AdditiveError{1.0, 2.0, 0.5});
    CHECK(shifted.mu_hat == Approx(1.0));
    CHECK(shifted.gammas[0] == Approx((1.833 - 0.5) / 4.0));

    const auto scaled = corrected_moments(s, MultiplicativeError{2.0, 0.0});
    CHECK(scaled.mu_hat == Approx(1.5));
    CHECK(scaled.gammas[0] == Approx(1.833 / 4.0));
    CHECK(scaled.gammas[2] == Approx(0.1));

    const auto mult = corrected_moments(s, MultiplicativeError{2.0, 0.05});
    CHECK(mult.gammas[0] == Approx(1.833 / 4.2 - 0.05 * 1.5 * 1.5 / 1.05));
    CHECK_THROWS_AS(corrected_moments(s, MultiplicativeError{2.0, 0.5}), ModelError);

    CHECK_THROWS_WITH(corrected_moments(s, AdditiveError{0.0, 1.0, 2.0}),
                      "overcorrection: error variance too large for observed variability");
}

TEST_CASE("overcorrection triggers exactly at sigma_e2 >= gamma0*") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double g0 = u(gen), se = u(gen);
        const AutocovSummary s{0.0, {g0, 0.3 * g0}};
        const AdditiveError err{0.0, 1.0 + u(gen), se};
        bool threw = false;
        try {
            (void)corrected_moments(s, err);
        } catch (const ModelError&) {
            threw = true;
        }
        CHECK(threw == (se >= g0));
        CHECK(threw == !validate_bounds(err, g0, 0.0));
    }
}

TEST_CASE("fit_corrected composes fit_ee with corrected moments") {
    const auto s = testing::ar_path(1.0, {0.6, -0.2}, 3000, 5);
    const auto surrogate = contaminate(s, AdditiveError{0.0, 1.0, 0.3}, 6);
    const auto id = fit_corrected(surrogate, 2, identity_error());
    const auto ee = fit_ee(autocov_summary(surrogate, 2));
    CHECK(parameter_vector(id.model) == parameter_vector(ee.model));

    const AdditiveError err{0.0, 1.0, 0.3};
    const auto fit = fit_corrected(surrogate, 2, err);
    const auto direct = fit_ee(corrected_moments(autocov_summary(surrogate, 2), err));
    CHECK(parameter_vector(fit.model) == parameter_vector(direct.model));
    CHECK(fit.n_obs == surrogate.size());

    CHECK_THROWS_AS(fit_corrected(Series({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0}), 2, err), DataError);
}

TEST_CASE("corrected estimators remove attenuation") {
    const auto s = testing::ar_path(1.0, {0.5}, 50000, 9);
    SECTION("additive") {
        const AdditiveError err{0.0, 1.0, 1.0};
        const auto x = contaminate(s, err, 10);
        CHECK(fit_corrected(x, 1, err).model.phi[0] == Approx(0.5).margin(0.02));
        const double naive = fit_ls(x, 1).model.phi[0];
        const double expected = naive_limit_ar1_additive(ArModel{1.0, {0.5}, 1.0}, err).phi_star[0];
        CHECK(naive == Approx(expected).margin(0.02));
    }
    SECTION("multiplicative") {
        const MultiplicativeError err{scale_from_asymptomatic_rate(0.46), 0.3};
        const auto x = contaminate(s, err, 11);
        CHECK(fit_corrected(x, 1, err).model.phi[0] == Approx(0.5).margin(0.03));
    }
}

TEST_CASE("corrected estimator concentrates as T grows") {
    const AdditiveError err{0.0, 1.0, 1.0};
    auto run = [&](std::size_t n, std::uint64_t base) {
        double bias = 0.0, sq = 0.0;
        constexpr int reps = 200;
        for (int r = 0; r < reps; ++r) {
            const auto x = contaminate(testing::ar_path(0.0, {0.5}, n, base + r), err, base + 5000 + r);
            const double d = fit_corrected(x, 1, err).model.phi[0] - 0.5;
            bias += d;
            sq += d * d;
        }
        return std::pair(bias / reps, std::sqrt(sq / reps));
    };
    const auto [bias_small, rmse_small] = run(2000, 100);
    const auto [bias_large, rmse_large] = run(20000, 900);
    INFO("bias T=2000: " << bias_small << ", bias T=20000: " << bias_large);
    CHECK(rmse_large < rmse_small);
    CHECK(std::abs(bias_large) < 3.0 * rmse_large / std::sqrt(200.0));
}

TEST_CASE("block bootstrap") {
    const AdditiveError err{0.0, 1.0, 0.5};
    const auto x = contaminate(testing::ar_path(1.0, {0.5}, 400, 12), err, 13);

    SECTION("whole-series blocks give zero variance") {
        const auto r = block_bootstrap(x, 1, err, static_cast<int>(x.size()), 20, 1);
        for (double v : r.variances) CHECK(v == Approx(0.0).margin(1e-20));
    }
    SECTION("deterministic and keyed per replicate") {
        const auto a = block_bootstrap(x, 1, err, 7, 50, 42, true);
        const auto b = block_bootstrap(x, 1, err, 7, 50, 42, true);
        CHECK(a.variances == b.variances);
        const auto shorter = block_bootstrap(x, 1, err, 7, 20, 42, true);
        for (std::size_t i = 0; i < 20; ++i) CHECK((*shorter.replicates)[i] == (*a.replicates)[i]);
        CHECK(a.se[1] == Approx(std::sqrt(a.variances[1])));
        CHECK(a.n_reps == 50);
        CHECK(a.block_len == 7);
    }
    SECTION("argument checks") {
        CHECK_THROWS_AS(block_bootstrap(x, 1, err, 0, 20, 1), DataError);
        CHECK_THROWS_AS(block_bootstrap(x, 1, err, 5, 1, 1), DataError);
    }
    SECTION("too many failed replicates abort") {
        const double g0 = autocov_hat(x, 0);
        CHECK_THROWS_AS(block_bootstrap(x, 1, AdditiveError{0.0, 1.0, 0.999 * g0}, 5, 100, 3), ModelError);
    }
    CHECK(default_block_length(2000) == 13);
    CHECK(default_block_length(1000) == 10);
    CHECK(default_block_length(1001) == 11);
}

TEST_CASE("bootstrap SE tracks the sampling SD") {
    const AdditiveError err{0.0, 1.0, 1.0};
    std::vector<double> est;
    double se_sum = 0.0;
    constexpr int datasets = 300;
    for (int r = 0; r < datasets; ++r) {
        const auto x = contaminate(testing::ar_path(0.0, {0.5}, 2000, 300 + r), err, 700 + r);
        est.push_back(fit_corrected(x, 1, err).model.phi[0]);
        if (r < 5) se_sum += block_bootstrap(x, 1, err, default_block_length(2000), 300, 50 + r).se[1];
    }
    double mean = 0.0;
    for (double v : est) mean += v;
    mean /= datasets;
    double ss = 0.0;
    for (double v : est) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (datasets - 1));
    CHECK(se_sum / 5.0 == Approx(sd).epsilon(0.25));
}

TEST_CASE("sandwich covariance") {
    const AdditiveError err{0.0, 1.0, 1.0};
    const auto x = contaminate(testing::ar_path(0.0, {0.5}, 5000, 21), err, 22);
    const auto fit = fit_corrected(x, 1, err);
    const ArModel truth{0.0, {0.5}, 1.0};
    const auto q = q1_matrix(truth, err, 1);

    SECTION("linear in Q") {
        const auto v = sandwich_cov(fit, q);
        const auto v2 = sandwich_cov(fit, 2.0 * q);
        CHECK((v2 - 2.0 * v).norm() == 0.0);
    }
    SECTION("finite-difference Jacobian matches the analytic derivative") {
        const double g0 = fit.surrogate_summary.gammas[0], g1 = fit.surrogate_summary.gammas[1];
        const auto g = corrected_jacobian(fit);
        const double d = g0 - err.sigma_e2;
        CHECK(g(0, 1) == Approx(1.0 / d).epsilon(1e-4));
        CHECK(g(0, 0) == Approx(-g1 / (d * d)).epsilon(1e-4));
    }
    SECTION("asymmetric Q is rejected") {
        Eigen::MatrixXd bad = q;
        bad(0, 1) += 1e-3 * q.norm();
        CHECK_THROWS_AS(sandwich_cov(fit, bad), ModelError);
    }
}

TEST_CASE("sandwich recovers the classical 1/T variance for white noise") {
    constexpr std::size_t n = 2000;
    const ArModel wn{0.0, {0.0}, 1.0};
    const auto q = bartlett_matrix(wn, 1);
    const auto fit = fit_corrected(testing::ar_path(0.0, {0.0}, n, 31), 1, identity_error());
    const double v = sandwich_cov(fit, q)(0, 0);
    CHECK(v == Approx(1.0 / n).epsilon(0.10));

    std::vector<double> est;
    for (int r = 0; r < 500; ++r) est.push_back(fit_ls(testing::ar_path(0.0, {0.0}, n, 4000 + r), 1).model.phi[0]);
    double mean = 0.0, ss = 0.0;
    for (double e : est) mean += e;
    mean /= 500.0;
    for (double e : est) ss += (e - mean) * (e - mean);
    CHECK(ss / 499.0 == Approx(v).epsilon(0.15));
}
