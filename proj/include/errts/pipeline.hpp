#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errts/error_models.hpp"
#include "errts/forecasting.hpp"
#include "errts/selection.hpp"
#include "errts/series.hpp"

namespace errts {

enum class ErrorKind { Additive, Multiplicative };

/// One sensitivity setting: the error model plus its grid label.
struct GridPoint {
    ErrorKind kind = ErrorKind::Additive;
    double value = 0.0;  // sigma_e2 or sigma_u2
    ErrorModel error;
};

struct SensitivitySpec {
    std::vector<GridPoint> grid;
    /// Fixed differencing order; screened with ADF when unset.
    std::optional<int> diff;
    int max_diff = 1;
    /// Fixed AR order; AIC-selected when unset.
    std::optional<int> lag;
    int p_max = 10;
    int horizon = 5;
    double alpha = 0.05;
    IntervalScale interval_scale = IntervalScale::Sqrt;
    int boot_reps = 500;
    std::optional<int> block_len;
    int mc_reps = 20000;
    std::uint64_t seed = 1;
};

/// Additive grid with alpha = (0, scale) over the sigma_e2 values.
[[nodiscard]] std::vector<GridPoint> additive_grid(const std::vector<double>& sigma_e2, double alpha0,
                                                   double alpha1);
/// Multiplicative grid with beta0 = scale over the sigma_u2 values.
[[nodiscard]] std::vector<GridPoint> multiplicative_grid(const std::vector<double>& sigma_u2, double beta0,
                                                         UDist dist);

struct ParameterRow {
    std::string name;
    double est = 0.0;
    double se = 0.0;
    /// Two-sided Wald p-value; empty when se = 0.
    std::optional<double> p_value;
};

struct VariantReport {
    std::string label;
    std::optional<GridPoint> point;  // empty for the naive row
    std::string error_description;
    enum class Status { Ok, BoundViolation, Failed } status = Status::Ok;
    std::string message;
    std::vector<ParameterRow> parameters;
    bool stationary = true;
    int bootstrap_failures = 0;
    bool mspe_closed_form = true;
    Forecast fitted;  // on the analysed (possibly differenced) scale
    Forecast level;   // integrated back to levels
    double pe_total = 0.0;
    double level_pe_total = 0.0;
};

struct AnalysisReport {
    std::size_t n_levels = 0;
    std::size_t n_analysed = 0;
    std::optional<Date> last_date;
    int diff_order = 0;
    std::optional<AdfResult> adf;
    bool screen_warning = false;
    int lag = 1;
    bool lag_selected = false;
    int block_len = 0;
    int boot_reps = 0;
    int horizon = 0;
    double alpha = 0.05;
    IntervalScale interval_scale = IntervalScale::Sqrt;
    std::uint64_t seed = 0;
    VariantReport naive;
    std::vector<VariantReport> variants;  // sorted by (kind, value)
};

/// Screening, lag selection, naive and corrected fits with bootstrap SEs, forecasts and
/// MSPEs for every grid point. Per-point failures are recorded, not thrown.
[[nodiscard]] AnalysisReport analyze(const Series& levels, const SensitivitySpec& spec);

/// Two-sided normal p-value of est/se.
[[nodiscard]] std::optional<double> wald_p_value(double est, double se);

[[nodiscard]] std::string report_json(const AnalysisReport& report);
[[nodiscard]] std::string report_text(const AnalysisReport& report);
/// Columns date, point, pe, lo, hi, variant; level-scale forecasts.
[[nodiscard]] std::string report_csv(const AnalysisReport& report);

}  // namespace errts
