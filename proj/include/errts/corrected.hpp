#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "errts/ar_model.hpp"
#include "errts/error_models.hpp"
#include "errts/series.hpp"

namespace errts {

/// AR fit from corrected surrogate moments.
struct CorrectedFit {
    ArModel model;
    AutocovSummary corrected_summary;
    AutocovSummary surrogate_summary;
    ErrorModel error_model;
    std::size_t n_obs = 0;
    /// False when the corrected coefficients are not stationary (a warning only).
    bool stationary = true;
};

/// Maps surrogate moments to moments sharing the limits of the clean series.
/// Throws ModelError on overcorrection (corrected gamma_0 <= 0).
[[nodiscard]] AutocovSummary corrected_moments(const AutocovSummary& surrogate, const ErrorModel& err);

/// Estimating-equation fit on corrected moments. Requires T >= 5p.
[[nodiscard]] CorrectedFit fit_corrected(const Series& surrogate, int p, const ErrorModel& err);

struct BootstrapResult {
    int n_reps = 0;
    int block_len = 0;
    /// Per parameter, ordered (phi0, phi_1..phi_p, sigma_eps2).
    std::vector<double> variances;
    std::vector<double> se;
    /// Replicates whose refit failed (skipped).
    int failures = 0;
    /// One parameter vector per successful replicate, when requested.
    std::optional<std::vector<std::vector<double>>> replicates;
};

/// Default block length ceil(T^(1/3)).
[[nodiscard]] int default_block_length(std::size_t n);

/// Moving-block bootstrap of the surrogate series with a corrected refit per replicate.
/// Replicate n draws from keyed_stream(seed, n). Throws ModelError when more than 10% fail.
[[nodiscard]] BootstrapResult block_bootstrap(const Series& surrogate, int p, const ErrorModel& err, int block_len,
                                              int n_reps, std::uint64_t seed, bool keep_replicates = false);

/// Asymptotic covariance G Q G' / T of the corrected phi, with G the finite-difference
/// Jacobian of phi with respect to the surrogate (gamma_0, ..., gamma_p).
[[nodiscard]] Eigen::MatrixXd sandwich_cov(const CorrectedFit& fit, const Eigen::MatrixXd& q);

/// The Jacobian used by sandwich_cov, p x (p+1).
[[nodiscard]] Eigen::MatrixXd corrected_jacobian(const CorrectedFit& fit);

}  // namespace errts
