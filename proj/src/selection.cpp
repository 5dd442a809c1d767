#include "errts/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "errts/errors.hpp"
#include "errts/estimation.hpp"

namespace errts {

namespace {

constexpr std::array<double, 8> kProbs{0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};

struct CriticalRow {
    double inv_t;
    std::array<double, 8> values;
};

// Dickey-Fuller tau distribution, regression with constant.
constexpr std::array<CriticalRow, 6> kTable{{
    {1.0 / 25, {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72}},
    {1.0 / 50, {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66}},
    {1.0 / 100, {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63}},
    {1.0 / 250, {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62}},
    {1.0 / 500, {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61}},
    {0.0, {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60}},
}};

std::array<double, 8> critical_values(int n_obs) {
    const double x = std::clamp(1.0 / std::max(n_obs, 1), 0.0, kTable.front().inv_t);
    for (std::size_t r = 0; r + 1 < kTable.size(); ++r) {
        const auto& a = kTable[r];
        const auto& b = kTable[r + 1];
        if (x <= a.inv_t && x >= b.inv_t) {
            const double w = (a.inv_t - x) / (a.inv_t - b.inv_t);
            std::array<double, 8> out{};
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - w) * a.values[i] + w * b.values[i];
            return out;
        }
    }
    return kTable.back().values;
}

}  // namespace

int adf_default_lags(std::size_t n) {
    int k = static_cast<int>(std::floor(std::cbrt(static_cast<double>(n - 1))));
    while (static_cast<std::size_t>(k + 1) * (k + 1) * (k + 1) <= n - 1) ++k;
    while (k > 0 && static_cast<std::size_t>(k) * k * k > n - 1) --k;
    return k;
}

double adf_p_value(double statistic, int n_obs) {
    const auto cv = critical_values(n_obs);
    if (statistic <= cv.front()) return kProbs.front();
    if (statistic >= cv.back()) return kProbs.back();
    for (std::size_t i = 0; i + 1 < cv.size(); ++i) {
        if (statistic <= cv[i + 1]) {
            const double w = (statistic - cv[i]) / (cv[i + 1] - cv[i]);
            return kProbs[i] + w * (kProbs[i + 1] - kProbs[i]);
        }
    }
    return kProbs.back();
}

AdfResult adf_test(const Series& s, std::optional<int> lags) {
    const std::size_t n = s.size();
    if (n < 15) throw DataError("ADF test needs T >= 15");
    if (s.is_constant()) throw DataError("constant series: ADF statistic undefined");
    const int k = lags.value_or(adf_default_lags(n));
    if (k < 0) throw DataError("negative ADF lag order");
    const auto y = s.values();
    std::vector<double> dy(n - 1);
    for (std::size_t t = 1; t < n; ++t) dy[t - 1] = y[t] - y[t - 1];

    // Rows t = k .. n-2 of dy: dy[t] on 1, y[t], dy[t-1..t-k].
    const auto ku = static_cast<std::size_t>(k);
    if (dy.size() <= ku + 3 + ku) throw DataError("series too short for the ADF lag order");
    const auto m = static_cast<Eigen::Index>(dy.size() - ku);
    const Eigen::Index cols = 2 + k;
    Eigen::MatrixXd x(m, cols);
    Eigen::VectorXd z(m);
    // Centering the level column leaves its coefficient unchanged given the constant.
    double level_mean = 0.0;
    for (std::size_t t = ku; t < dy.size(); ++t) level_mean += y[t];
    level_mean /= static_cast<double>(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const std::size_t t = ku + static_cast<std::size_t>(r);
        z(r) = dy[t];
        x(r, 0) = 1.0;
        x(r, 1) = y[t] - level_mean;
        for (int i = 1; i <= k; ++i) x(r, 1 + i) = dy[t - static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd beta = solve_checked(xtx, x.transpose() * z, "singular ADF regression");
    const Eigen::VectorXd resid = z - x * beta;
    const double s2 = resid.squaredNorm() / static_cast<double>(m - cols);
    const Eigen::MatrixXd inv = xtx.inverse();
    const double se = std::sqrt(s2 * inv(1, 1));
    if (!(se > 0.0)) throw DataError("degenerate ADF regression");

    AdfResult out;
    out.statistic = beta(1) / se;
    out.lags_used = k;
    out.n_obs = static_cast<int>(m);
    out.p_value = adf_p_value(out.statistic, out.n_obs);
    return out;
}

double aic(const Series& s, int p, std::optional<int> start) {
    const int first = start.value_or(p);
    if (first < p) throw DataError("AIC window cannot start before p");
    const ArFit fit = fit_ls(s, p);
    const auto x = s.values();
    double rss = 0.0;
    std::size_t count = 0;
    for (std::size_t t = static_cast<std::size_t>(first); t < x.size(); ++t, ++count) {
        double r = x[t] - fit.model.phi0;
        for (int j = 1; j <= p; ++j) r -= fit.model.phi[static_cast<std::size_t>(j - 1)] * x[t - static_cast<std::size_t>(j)];
        rss += r * r;
    }
    if (count == 0) throw DataError("empty AIC window");
    const double nn = static_cast<double>(count);
    const double sigma2 = rss / nn;
    if (!(sigma2 > 0.0)) throw ModelError("zero residual variance: log-likelihood unbounded");
    const double loglik = -0.5 * nn * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
    return -2.0 * loglik + 2.0 * p;
}

int select_lag(const Series& s, int p_max) {
    if (p_max < 1) throw DataError("p_max must be >= 1");
    if (!(static_cast<double>(p_max) < static_cast<double>(s.size()) / 5.0)) {
        throw DataError("p_max must be below T/5");
    }
    int best = 1;
    double best_aic = aic(s, 1, p_max);
    for (int p = 2; p <= p_max; ++p) {
        const double a = aic(s, p, p_max);
        if (a < best_aic) {
            best_aic = a;
            best = p;
        }
    }
    return best;
}

ScreenResult screen(const Series& s, int max_diff) {
    if (max_diff < 0) throw DataError("max_diff must be >= 0");
    Series current = s;
    AdfResult last;
    for (int d = 0; d <= max_diff; ++d) {
        if (d > 0) current = difference(current);
        last = adf_test(current);
        if (last.p_value < 0.10) return {d, last, false, current};
    }
    return {max_diff, last, true, current};
}

}  // namespace errts
