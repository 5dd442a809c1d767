#include <catch_amalgamated.hpp>

#include <cmath>

#include "errts/errors.hpp"
#include "errts/estimation.hpp"
#include "support.hpp"

using namespace errts;
using Catch::Approx;

TEST_CASE("fit_ls recovers generating parameters") {
    SECTION("white noise") {
        const auto fit = fit_ls(testing::ar_path(0.0, {0.0}, 50000, 21), 1);
        CHECK(std::abs(fit.model.phi[0]) <= 0.02);
        CHECK(fit.model.sigma_eps2 == Approx(1.0).margin(0.03));
        CHECK(fit.method == FitMethod::LeastSquares);
    }
    SECTION("AR(1)") {
        const auto fit = fit_ls(testing::ar_path(1.0, {0.5}, 50000, 22), 1);
        CHECK(fit.model.phi[0] == Approx(0.5).margin(0.02));
        CHECK(fit.model.phi0 == Approx(1.0).margin(0.05));
        CHECK(fit.stationary);
    }
    SECTION("AR(2)") {
        const auto fit = fit_ls(testing::ar_path(0.0, {0.5, -0.3}, 50000, 23), 2);
        CHECK(fit.model.phi[0] == Approx(0.5).margin(0.02));
        CHECK(fit.model.phi[1] == Approx(-0.3).margin(0.02));
    }
}

TEST_CASE("fit_ls preconditions") {
    CHECK_THROWS_AS(fit_ls(Series({1.0, 2.0, 3.0, 4.0}), 1), DataError);
    CHECK_THROWS_AS(fit_ls(Series(std::vector<double>(20, 3.0)), 1), DataError);
    CHECK_THROWS_AS(fit_ls(Series({1.0, 2.0, 3.0, 4.0, 5.0, 6.0}), 0), DataError);
}

TEST_CASE("fit_ls estimates eta on request") {
    const auto s = testing::ar_path(0.0, {0.4}, 50000, 24);
    CHECK(fit_ls(s, 1).model.eta == 3.0);
    CHECK(fit_ls(s, 1, true).model.eta == Approx(3.0).margin(0.1));
}

TEST_CASE("fit_ee on hand-built summaries") {
    const auto wn = fit_ee(AutocovSummary{4.0, {1.0, 0.0, 0.0}});
    CHECK(wn.model.phi[0] == Approx(0.0).margin(1e-15));
    CHECK(wn.model.phi[1] == Approx(0.0).margin(1e-15));
    CHECK(wn.model.phi0 == Approx(4.0));
    CHECK(wn.model.sigma_eps2 == Approx(1.0));

    const auto ar1 = fit_ee(AutocovSummary{2.0, {4.0 / 3.0, 2.0 / 3.0}});
    CHECK(ar1.model.phi[0] == Approx(0.5));
    CHECK(ar1.model.phi0 == Approx(1.0));
    CHECK(ar1.model.sigma_eps2 == Approx(1.0));
}

TEST_CASE("fit_ee solves its defining equations") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto s = testing::ar_path(0.5, {0.6, -0.2, 0.1}, 3000, seed);
        const auto sum = autocov_summary(s, 3);
        const auto fit = fit_ee(sum);
        CHECK(ee_residual(sum, fit.model) < 1e-10);
        double total = 0.0;
        for (double c : fit.model.phi) total += c;
        CHECK(fit.model.phi0 == sum.mu_hat * (1.0 - total));
    }
}

TEST_CASE("fit_ee rejects ill-conditioned autocovariances") {
    try {
        (void)fit_ee(AutocovSummary{0.0, {1.0, 1.0, 1.0}});
        FAIL("expected a conditioning error");
    } catch (const ConditioningError& e) {
        CHECK(e.condition() >= kMaxCondition);
    }
}

TEST_CASE("estimators are asymptotically equivalent") {
    CHECK(fitted_equivalence_gap(testing::ar_path(1.0, {0.5}, 10000, 31), 1) < 0.01);
    CHECK(fitted_equivalence_gap(testing::ar_path(1.0, {0.5}, 100000, 32), 1) < 0.003);
    CHECK(fitted_equivalence_gap(testing::ar_path(0.0, {0.0}, 10000, 33), 1) < 0.01);
}

TEST_CASE("both estimators converge over replicates") {
    double ls_err = 0.0, ee_err = 0.0;
    constexpr int reps = 200;
    for (int r = 0; r < reps; ++r) {
        const auto s = testing::ar_path(1.0, {0.5, -0.3}, 5000, 1000 + r);
        const auto ls = fit_ls(s, 2).model;
        const auto ee = fit_ee(autocov_summary(s, 2)).model;
        ls_err += std::abs(ls.phi[0] - 0.5) + std::abs(ls.phi[1] + 0.3);
        ee_err += std::abs(ee.phi[0] - 0.5) + std::abs(ee.phi[1] + 0.3);
    }
    CHECK(ls_err / (2 * reps) < 0.03);
    CHECK(ee_err / (2 * reps) < 0.03);
}

TEST_CASE("parameter vector ordering") {
    const ArModel m{1.0, {0.2, 0.3}, 4.0};
    CHECK(parameter_vector(m) == std::vector<double>{1.0, 0.2, 0.3, 4.0});
}
