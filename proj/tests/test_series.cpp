#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "errts/ar_model.hpp"
#include "errts/errors.hpp"
#include "errts/series.hpp"
#include "support.hpp"

using namespace errts;
using Catch::Approx;

TEST_CASE("mean_hat") {
    CHECK(mean_hat(Series({1.0, 1.0, 1.0})) == 1.0);
    CHECK(mean_hat(Series({0.0, 2.0})) == 1.0);
    CHECK_THROWS_AS(Series(std::vector<double>{}), DataError);
    CHECK_THROWS_WITH(mean_hat(std::span<const double>{}), "empty input");

    const auto s = testing::ar_path(1.0, {0.5}, 10000, 11);
    CHECK(mean_hat(s) == Approx(2.0).margin(0.1));
}

TEST_CASE("series rejects non-finite values") {
    CHECK_THROWS_AS(Series({1.0, NAN}), DataError);
    CHECK_THROWS_AS(Series({INFINITY}), DataError);
}

TEST_CASE("autocov_hat uses 1/(T-k)") {
    const Series alt({-1.0, 1.0, -1.0, 1.0});
    CHECK(autocov_hat(alt, 0) == Approx(1.0));
    CHECK(autocov_hat(alt, 1) == Approx(-1.0));
    CHECK(autocov_hat(Series({2.0, 2.0, 2.0}), 2) == 0.0);
    CHECK_THROWS_WITH(autocov_hat(alt, 4), "lag exceeds length");

    // Hand sum for an uneven series: mean 2, deviations (-1, 1, 0), lag-1 products -1, 0.
    CHECK(autocov_hat(Series({1.0, 3.0, 2.0}), 1) == Approx(-0.5));

    const auto s = testing::ar_path(0.0, {0.5}, 200000, 3);
    CHECK(autocov_hat(s, 1) == Approx(2.0 / 3.0).margin(0.02));
}

TEST_CASE("autocov_summary") {
    const auto sum = autocov_summary(Series({-1.0, 1.0, -1.0, 1.0}), 1);
    CHECK(sum.mu_hat == 0.0);
    REQUIRE(sum.gammas.size() == 2);
    CHECK(sum.gammas[0] == Approx(1.0));
    CHECK(sum.gammas[1] == Approx(-1.0));

    const auto flat = autocov_summary(Series({4.0, 4.0, 4.0, 4.0}), 2);
    CHECK(std::all_of(flat.gammas.begin(), flat.gammas.end(), [](double g) { return g == 0.0; }));

    const auto s = testing::ar_path(0.0, {0.5}, 100000, 5);
    const auto big = autocov_summary(s, 2);
    CHECK(big.gammas[0] == Approx(4.0 / 3.0).margin(0.05));
    CHECK(big.gammas[1] == Approx(2.0 / 3.0).margin(0.05));
    CHECK(big.gammas[2] == Approx(1.0 / 3.0).margin(0.05));

    const auto toe = autocov_summary(s, 4).toeplitz();
    CHECK((toe - toe.transpose()).norm() == 0.0);
}

TEST_CASE("autocov_hat at lag 0 is non-negative and zero only for constants") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto s = testing::ar_path(0.0, {0.3}, 50, seed);
        CHECK(autocov_hat(s, 0) > 0.0);
    }
    CHECK(autocov_hat(Series({7.0}), 0) == 0.0);
}

TEST_CASE("difference and integrate") {
    const Series s({1.0, 2.0, 4.0});
    const auto d = difference(s);
    CHECK(std::vector<double>(d.values().begin(), d.values().end()) == std::vector<double>{1.0, 2.0});
    CHECK(d.diff_order() == 1);

    const auto c = difference(Series({3.0, 3.0, 3.0}));
    CHECK(std::all_of(c.values().begin(), c.values().end(), [](double v) { return v == 0.0; }));

    const auto back = integrate(d, 1.0);
    CHECK(std::vector<double>(back.values().begin(), back.values().end()) == std::vector<double>{1.0, 2.0, 4.0});
    CHECK(back.diff_order() == 0);

    const auto zeros = integrate(Series({0.0, 0.0}, std::nullopt, 1), 5.0);
    CHECK(std::all_of(zeros.values().begin(), zeros.values().end(), [](double v) { return v == 5.0; }));

    CHECK_THROWS_AS(difference(Series({1.0})), DataError);
    CHECK_THROWS_AS(integrate(Series({1.0, 2.0}), 0.0), DataError);
}

TEST_CASE("difference/integrate round trip stays within accumulated rounding") {
    const auto s = testing::ar_path(3.0, {0.9}, 5000, 8);
    const auto back = integrate(difference(s), s[0]);
    REQUIRE(back.size() == s.size());
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        scale = std::max(scale, std::abs(s[i]));
        worst = std::max(worst, std::abs(back[i] - s[i]));
    }
    CHECK(worst <= 1e-12 * static_cast<double>(s.size()) * scale);
}

TEST_CASE("dates follow the origin") {
    using namespace std::chrono;
    const Date origin = sys_days{year{2020} / 5 / 1};
    const Series s({1.0, 2.0, 3.0}, origin);
    CHECK(*s.date_at(2) == origin + days{2});
    CHECK(*difference(s).origin() == origin + days{1});
    CHECK_FALSE(Series({1.0}).date_at(0).has_value());
}

TEST_CASE("is_stationary on textbook cases") {
    CHECK(is_stationary(ArModel{0.0, {0.5}}));
    CHECK_FALSE(is_stationary(ArModel{0.0, {1.0}}));
    CHECK(is_stationary(ArModel{0.0, {0.5, 0.3}}));
    CHECK_FALSE(is_stationary(ArModel{0.0, {0.5, 0.6}}));
}

TEST_CASE("spectral radius matches known roots") {
    // (z - 0.5)(z + 0.4)(z - 0.9) = z^3 - 1.0 z^2 - 0.11 z + 0.18
    const std::vector<double> phi{1.0, 0.11, -0.18};
    CHECK(spectral_radius(phi) == Approx(0.9).epsilon(1e-9));
    // Complex pair of modulus sqrt(0.8).
    CHECK(spectral_radius(std::vector<double>{1.0, -0.8}) == Approx(std::sqrt(0.8)).epsilon(1e-9));
}

TEST_CASE("AR(2) stationarity agrees with the triangle conditions on a grid") {
    int disagreements = 0;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            const double p1 = -2.0 + 0.1 * i, p2 = -2.0 + 0.1 * j;
            const double margin = std::min({1.0 - (p1 + p2), 1.0 - (p2 - p1), 1.0 - std::abs(p2)});
            if (std::abs(margin) < 1e-6) continue;
            if ((margin > 0.0) != is_stationary(ArModel{0.0, {p1, p2}})) ++disagreements;
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("true autocovariances satisfy Yule-Walker") {
    const ArModel m{0.0, {0.5, -0.3}, 2.0};
    const auto g = true_autocovariances(m, 6);
    CHECK(g[0] - 0.5 * g[1] + 0.3 * g[2] == Approx(2.0));
    for (int k = 1; k <= 6; ++k) CHECK(g[k] == Approx(0.5 * g[k - 1] - 0.3 * g[std::abs(k - 2)]).margin(1e-12));
    const auto g1 = true_autocovariances(ArModel{0.0, {0.5}}, 2);
    CHECK(g1[0] == Approx(4.0 / 3.0));
    CHECK(g1[2] == Approx(1.0 / 3.0));
}
