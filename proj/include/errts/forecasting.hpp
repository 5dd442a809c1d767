#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "errts/ar_model.hpp"
#include "errts/error_models.hpp"

namespace errts {

enum class ForecastScale { Differenced, Level };
enum class IntervalScale { Sqrt, Literal };

struct Forecast {
    int horizon = 0;
    std::vector<double> points;
    std::vector<double> mspe;
    std::vector<double> lo;
    std::vector<double> hi;
    double alpha = 0.05;
    ForecastScale scale = ForecastScale::Differenced;
};

/// Unbiased proxies for the true initial values: (x - alpha0)/alpha1 or x/beta0.
[[nodiscard]] std::vector<double> adjust_initials(std::span<const double> last_surrogates, const ErrorModel& err);

/// Recursive plug-in forecasts for horizons 1..H. `initials` runs oldest to newest, length p.
[[nodiscard]] std::vector<double> forecast(const ArModel& model, std::span<const double> initials, int horizon);

/// Closed-form h-step MSPE with error-contaminated initial values. AR(1) only.
[[nodiscard]] double mspe(const ArModel& model, const ErrorModel& err, int h);
[[nodiscard]] std::vector<double> mspe_curve(const ArModel& model, const ErrorModel& err, int horizon);

/// Simulation estimate of the h-step MSPE for any stationary AR(p). Requires reps >= 100.
[[nodiscard]] double monte_carlo_mspe(const ArModel& model, const ErrorModel& err, int h, int reps,
                                      std::uint64_t seed);
/// All horizons 1..H from one set of simulated paths.
[[nodiscard]] std::vector<double> monte_carlo_mspe_curve(const ArModel& model, const ErrorModel& err,
                                                         int horizon, int reps, std::uint64_t seed);

/// Upper alpha/2 quantile of the standard normal.
[[nodiscard]] double normal_quantile_upper(double alpha);

/// point -/+ q * sqrt(pe) (Sqrt) or point -/+ q * pe (Literal).
[[nodiscard]] std::pair<double, double> prediction_interval(double point, double pe, double alpha,
                                                            IntervalScale scale = IntervalScale::Sqrt);

/// Assembles a Forecast with intervals from points and MSPEs.
[[nodiscard]] Forecast make_forecast(std::vector<double> points, std::vector<double> mspe, double alpha,
                                     IntervalScale scale, ForecastScale kind = ForecastScale::Differenced);

/// Maps a forecast of first differences to levels: cumulative sums from `anchor`
/// and partial sums of the MSPEs.
[[nodiscard]] Forecast to_level(const Forecast& diffs, double anchor, IntervalScale scale);

}  // namespace errts
