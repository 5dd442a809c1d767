#pragma once

#include <optional>

#include "errts/series.hpp"

namespace errts {

enum class AdfDeterministic { Constant };

struct AdfResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags_used = 0;
    int n_obs = 0;
    AdfDeterministic deterministic = AdfDeterministic::Constant;
};

/// Default augmentation order floor((T-1)^(1/3)).
[[nodiscard]] int adf_default_lags(std::size_t n);

/// Augmented Dickey-Fuller test with an intercept. Requires T >= 15 and a non-constant series.
[[nodiscard]] AdfResult adf_test(const Series& s, std::optional<int> lags = std::nullopt);

/// p-value for a constant-only ADF statistic with n_obs regression observations.
[[nodiscard]] double adf_p_value(double statistic, int n_obs);

/// -2 log L + 2p for the least-squares AR(p) fit with Gaussian conditional density,
/// summed over t = start+1..T (start defaults to p).
[[nodiscard]] double aic(const Series& s, int p, std::optional<int> start = std::nullopt);

/// argmin of aic over 1..p_max on the common window t = p_max+1..T; ties go to smaller p.
[[nodiscard]] int select_lag(const Series& s, int p_max);

struct ScreenResult {
    int diff_order = 0;
    AdfResult adf;
    /// No order up to max_diff rejected a unit root at 10%.
    bool warning = false;
    Series series;
};

/// Smallest differencing order whose series rejects a unit root at the 10% level.
[[nodiscard]] ScreenResult screen(const Series& s, int max_diff = 1);

}  // namespace errts
