#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errts/ar_model.hpp"
#include "errts/error_models.hpp"
#include "errts/series.hpp"

namespace errts {

/// Probability limits of the naive (error-ignoring) estimators.
struct NaiveLimit {
    double phi0_star = 0.0;
    std::vector<double> phi_star;
    double var_eps_star = 0.0;
    std::vector<double> gamma_star;  // gamma*_0 .. gamma*_p
};

/// Attenuation factor under additive error, in (0, 1].
[[nodiscard]] double omega1(double phi1, double sigma_eps2, double alpha1, double sigma_e2);

/// Attenuation factor under multiplicative error, in (0, 1].
[[nodiscard]] double omega2(double phi0, double phi1, double sigma_eps2, double sigma_u2);

[[nodiscard]] NaiveLimit naive_limit_ar1_additive(const ArModel& model, const AdditiveError& err);
[[nodiscard]] NaiveLimit naive_limit_ar1_multiplicative(const ArModel& model, const MultiplicativeError& err);

/// General-p limits from true autocovariances gamma_0..gamma_p (more entries are ignored)
/// and the true mean.
[[nodiscard]] NaiveLimit naive_limit_arp(const ArModel& model, const ErrorModel& err,
                                         std::span<const double> gammas, double mu);

/// Convenience: limits computed from the model's own autocovariances and mean.
[[nodiscard]] NaiveLimit naive_limit(const ArModel& model, const ErrorModel& err);

/// Autocovariance function gamma(h), h any integer, gamma(-h) = gamma(h).
class AutocovSequence {
public:
    /// Exact sequence of a stationary AR model (tabulated until it underflows).
    [[nodiscard]] static AutocovSequence from_model(const ArModel& model);
    /// gamma_0..gamma_{n-1} as given, zero beyond.
    [[nodiscard]] static AutocovSequence from_values(std::vector<double> gammas);
    [[nodiscard]] static AutocovSequence from_function(std::function<double(int)> fn);

    [[nodiscard]] double operator()(int lag) const { return fn_(lag < 0 ? -lag : lag); }

private:
    explicit AutocovSequence(std::function<double(int)> fn) : fn_(std::move(fn)) {}
    std::function<double(int)> fn_;
};

/// Default relative tail tolerance for the infinite sums.
inline constexpr double kSeriesTol = 1e-10;

struct TruncatedSum {
    double value = 0.0;
    int window = 0;  // largest |i| included
};

/// q_jk = (eta-3) g_j g_k + sum_i (g_i g_{i-j+k} + g_{i+k} g_{i-j}), truncated once the
/// autocovariance tail is below tol * gamma_0^2. Throws ModelError when it never is.
[[nodiscard]] TruncatedSum bartlett_sum(const AutocovSequence& gammas, double eta, int j, int k,
                                        double tol = kSeriesTol);
[[nodiscard]] double bartlett_q(const AutocovSequence& gammas, double eta, int j, int k,
                                double tol = kSeriesTol);

/// sum_h gamma_h over all integers h, truncated like bartlett_sum.
[[nodiscard]] double autocov_total(const AutocovSequence& gammas, double tol = kSeriesTol);

/// (j,k) element of Q1, the asymptotic covariance of sqrt(T)(g*_0, g*_1..g*_p)
/// under additive error.
[[nodiscard]] double q1_element(int j, int k, const ArModel& model, const AdditiveError& err,
                                const AutocovSequence& gammas, double tol = kSeriesTol);

/// Lag pattern of a central product moment E{prod_i (X_{t+l_i} - mu)}, sorted with min 0.
using LagPattern = std::vector<int>;

[[nodiscard]] LagPattern normalize_pattern(std::vector<int> lags);
[[nodiscard]] std::string pattern_name(const LagPattern& pattern);

/// Central moments of the clean process needed by Q2: third and fourth order mixed
/// moments keyed by lag pattern, plus v_k = sum_s E{(X_t-mu)(X_{t+k}-mu)(X_s-mu)}.
class MomentSet {
public:
    MomentSet() = default;

    void set_central(const std::vector<int>& lags, double value);
    void set_v(int k, double value);

    /// Throws ModelError("moment not provided: ...") when absent.
    [[nodiscard]] double central(const std::vector<int>& lags) const;
    [[nodiscard]] double v(int k) const;

    [[nodiscard]] const std::map<LagPattern, double>& centrals() const noexcept { return central_; }
    [[nodiscard]] const std::map<int, double>& vs() const noexcept { return v_; }

    /// Every lag pattern and v index that Q2 elements with indices in 0..max_lag read.
    [[nodiscard]] static std::vector<LagPattern> required_patterns(int max_lag);
    [[nodiscard]] static std::vector<int> required_v(int max_lag);

private:
    std::map<LagPattern, double> central_;
    std::map<int, double> v_;
};

/// Exact moments of a Gaussian-innovation AR model: odd moments vanish, fourth
/// moments follow from Isserlis' theorem.
[[nodiscard]] MomentSet gaussian_moments(const ArModel& model, int max_lag);

/// Plug-in averages over a long clean path. v_k is truncated at the first lag where
/// |gamma_h| < window_tol * gamma_0. Requires T >= 10 * max_lag.
[[nodiscard]] MomentSet estimate_moments(const Series& s, int max_lag, double window_tol = 1e-3);

/// (j,k) element of Q2 under multiplicative error.
[[nodiscard]] double q2_element(int j, int k, const ArModel& model, const MultiplicativeError& err,
                                const MomentSet& moments, double tol = kSeriesTol);
[[nodiscard]] double q2_element(int j, int k, const ArModel& model, const MultiplicativeError& err,
                                const MomentSet& moments, const AutocovSequence& gammas,
                                double tol = kSeriesTol);

/// Full (p+1) x (p+1) matrices.
[[nodiscard]] Eigen::MatrixXd bartlett_matrix(const ArModel& model, int p, double tol = kSeriesTol);
[[nodiscard]] Eigen::MatrixXd q1_matrix(const ArModel& model, const AdditiveError& err, int p,
                                        double tol = kSeriesTol);
[[nodiscard]] Eigen::MatrixXd q2_matrix(const ArModel& model, const MultiplicativeError& err,
                                        const MomentSet& moments, int p, double tol = kSeriesTol);

}  // namespace errts
