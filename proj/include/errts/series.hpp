#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace errts {

using Date = std::chrono::sys_days;

/// Ordered real-valued observations, optionally anchored to a calendar date.
///
/// Values are immutable after construction. `diff_order` counts applied
/// differencing steps so that forecasts of a differenced fit can be mapped
/// back to levels.
class Series {
public:
    explicit Series(std::vector<double> values, std::optional<Date> origin = std::nullopt,
                    int diff_order = 0);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double back() const { return values_.back(); }
    [[nodiscard]] std::optional<Date> origin() const noexcept { return origin_; }
    [[nodiscard]] int diff_order() const noexcept { return diff_order_; }
    [[nodiscard]] bool is_constant() const noexcept;

    /// Date of observation i, if the series has an origin.
    [[nodiscard]] std::optional<Date> date_at(std::size_t i) const;

private:
    std::vector<double> values_;
    std::optional<Date> origin_;
    int diff_order_;
};

/// Sample mean and autocovariances up to lag p.
struct AutocovSummary {
    double mu_hat = 0.0;
    std::vector<double> gammas;  // gamma_0 .. gamma_p

    [[nodiscard]] int p() const noexcept { return static_cast<int>(gammas.size()) - 1; }
    /// p x p Toeplitz matrix built from gamma_0 .. gamma_{p-1}.
    [[nodiscard]] Eigen::MatrixXd toeplitz() const;
    /// (gamma_1, ..., gamma_p).
    [[nodiscard]] Eigen::VectorXd lagged() const;
};

[[nodiscard]] double mean_hat(std::span<const double> values);
[[nodiscard]] double mean_hat(const Series& s);

/// gamma_k = 1/(T-k) * sum (x_t - mu)(x_{t-k} - mu). Note the 1/(T-k) normalization.
[[nodiscard]] double autocov_hat(const Series& s, int k);

[[nodiscard]] AutocovSummary autocov_summary(const Series& s, int p);

/// First differences s[t+1] - s[t].
[[nodiscard]] Series difference(const Series& s);

/// Cumulative sum starting at `anchor`; inverse of difference.
[[nodiscard]] Series integrate(const Series& diffs, double anchor);

}  // namespace errts
