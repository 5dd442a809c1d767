#include "errts/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "errts/errors.hpp"

namespace errts {

Series::Series(std::vector<double> values, std::optional<Date> origin, int diff_order)
    : values_(std::move(values)), origin_(origin), diff_order_(diff_order) {
    if (values_.empty()) throw DataError("empty input");
    if (diff_order_ < 0) throw DataError("negative differencing order");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("non-finite value at index " + std::to_string(i));
        }
    }
}

bool Series::is_constant() const noexcept {
    return std::all_of(values_.begin(), values_.end(),
                       [&](double v) { return v == values_.front(); });
}

std::optional<Date> Series::date_at(std::size_t i) const {
    if (!origin_) return std::nullopt;
    return *origin_ + std::chrono::days(static_cast<long>(i));
}

Eigen::MatrixXd AutocovSummary::toeplitz() const {
    const int n = p();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gammas[static_cast<std::size_t>(std::abs(i - j))];
    return g;
}

Eigen::VectorXd AutocovSummary::lagged() const {
    const int n = p();
    Eigen::VectorXd v(n);
    for (int k = 1; k <= n; ++k) v(k - 1) = gammas[static_cast<std::size_t>(k)];
    return v;
}

double mean_hat(std::span<const double> values) {
    if (values.empty()) throw DataError("empty input");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double mean_hat(const Series& s) { return mean_hat(s.values()); }

namespace {

double autocov_centered(std::span<const double> x, double mu, std::size_t k) {
    const std::size_t n = x.size();
    double acc = 0.0;
    for (std::size_t t = k; t < n; ++t) acc += (x[t] - mu) * (x[t - k] - mu);
    return acc / static_cast<double>(n - k);
}

}  // namespace

double autocov_hat(const Series& s, int k) {
    if (k < 0) throw DataError("negative lag");
    if (static_cast<std::size_t>(k) >= s.size()) throw DataError("lag exceeds length");
    if (s.is_constant()) return 0.0;
    return autocov_centered(s.values(), mean_hat(s), static_cast<std::size_t>(k));
}

AutocovSummary autocov_summary(const Series& s, int p) {
    if (p < 0) throw DataError("negative lag");
    if (static_cast<std::size_t>(p) >= s.size()) throw DataError("lag exceeds length");
    AutocovSummary out;
    out.mu_hat = mean_hat(s);
    out.gammas.assign(static_cast<std::size_t>(p) + 1, 0.0);
    if (s.is_constant()) return out;
    for (int k = 0; k <= p; ++k) {
        out.gammas[static_cast<std::size_t>(k)] =
            autocov_centered(s.values(), out.mu_hat, static_cast<std::size_t>(k));
    }
    return out;
}

Series difference(const Series& s) {
    if (s.size() < 2) throw DataError("differencing needs at least 2 observations");
    std::vector<double> d(s.size() - 1);
    for (std::size_t t = 0; t + 1 < s.size(); ++t) d[t] = s[t + 1] - s[t];
    std::optional<Date> origin;
    if (s.origin()) origin = *s.origin() + std::chrono::days(1);
    return Series(std::move(d), origin, s.diff_order() + 1);
}

Series integrate(const Series& diffs, double anchor) {
    if (diffs.diff_order() < 1) throw DataError("integrate would make the differencing order negative");
    std::vector<double> out;
    out.reserve(diffs.size() + 1);
    out.push_back(anchor);
    for (double d : diffs.values()) out.push_back(out.back() + d);
    std::optional<Date> origin;
    if (diffs.origin()) origin = *diffs.origin() - std::chrono::days(1);
    return Series(std::move(out), origin, diffs.diff_order() - 1);
}

}  // namespace errts
