#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>

#include "errts/series.hpp"

namespace errts {

/// X*_t = alpha0 + alpha1 X_t + e_t, e_t i.i.d. with mean 0 and variance sigma_e2.
struct AdditiveError {
    double alpha0 = 0.0;
    double alpha1 = 1.0;
    double sigma_e2 = 0.0;
    /// E(e^4); Gaussian 3 sigma_e^4 when unset.
    std::optional<double> e4;

    [[nodiscard]] double fourth_moment() const { return e4 ? *e4 : 3.0 * sigma_e2 * sigma_e2; }
    void validate() const;
};

enum class UDist { Lognormal, Gamma };

/// X*_t = beta0 u_t X_t, u_t i.i.d. positive with mean 1 and variance sigma_u2.
/// Higher moments of u follow analytically from the chosen family.
struct MultiplicativeError {
    double beta0 = 1.0;
    double sigma_u2 = 0.0;
    UDist dist = UDist::Lognormal;

    /// E(u^n) for n >= 0.
    [[nodiscard]] double moment(int n) const;
    [[nodiscard]] double u3() const { return moment(3); }
    [[nodiscard]] double u4() const { return moment(4); }
    /// E{(u-1)^3}.
    [[nodiscard]] double centered3() const;
    /// E{(u-1)^4}.
    [[nodiscard]] double centered4() const;
    void validate() const;
};

using ErrorModel = std::variant<AdditiveError, MultiplicativeError>;

/// Additive model with alpha = (0, 1) and no noise.
[[nodiscard]] ErrorModel identity_error();
[[nodiscard]] bool is_identity(const ErrorModel& err);
void validate(const ErrorModel& err);
[[nodiscard]] std::string describe(const ErrorModel& err);

/// Meta-analysis asymptomatic infection rate used for the default COVID scaling.
inline constexpr double kDefaultAsymptomaticRate = 0.46;

/// 1 / (1 - tau_a): the alpha1 or beta0 implied by under-reporting at rate tau_a.
[[nodiscard]] double scale_from_asymptomatic_rate(double tau_a);

/// E(X*) given E(X) = mu.
[[nodiscard]] double surrogate_mean(const ErrorModel& err, double mu);

/// Var(X*) given Var(X) = gamma0 and E(X) = mu.
[[nodiscard]] double surrogate_var(const ErrorModel& err, double gamma0, double mu);

/// Strict bound on the error variance implied by an observed Var(X*):
/// sigma_e2 < Var*, or sigma_u2 < Var* / (beta0^2 mu^2).
[[nodiscard]] bool validate_bounds(const ErrorModel& err, double observed_var_star, double mu);

/// Applies the error model to a clean series. Deterministic given `seed`.
[[nodiscard]] Series contaminate(const Series& s, const ErrorModel& err, std::uint64_t seed);

/// Applies the error model in place, drawing from `rng`. Does not validate `err`.
void contaminate_values(std::span<double> values, const ErrorModel& err, std::mt19937_64& rng);

/// Maps surrogate levels back to unbiased estimates of the true values:
/// (x - alpha0)/alpha1 or x/beta0.
[[nodiscard]] double invert_level(const ErrorModel& err, double x_star);

}  // namespace errts
