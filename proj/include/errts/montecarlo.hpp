#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "errts/ar_model.hpp"
#include "errts/error_models.hpp"
#include "errts/series.hpp"

namespace errts {

enum class Innovation { Gaussian };

struct SimSpec {
    ArModel model;
    std::size_t T = 0;
    std::size_t burn_in = 500;
    Innovation innovation = Innovation::Gaussian;
    std::uint64_t seed = 0;
};

/// Simulates burn_in + T steps from the stationary mean and returns the last T.
[[nodiscard]] Series simulate_ar(const SimSpec& spec);

struct ParameterMoments {
    /// Ordered (phi0, phi_1..phi_p, sigma_eps2).
    std::vector<double> mean;
    std::vector<double> sd;
    int count = 0;
};

struct NaiveExperiment {
    ParameterMoments naive;      // least squares on the surrogate
    ParameterMoments corrected;  // fit_corrected on the surrogate
    int corrected_failures = 0;
    int reps = 0;
};

/// Simulate, contaminate and fit `reps` times. Requires reps >= 50.
[[nodiscard]] NaiveExperiment naive_limit_experiment(const SimSpec& spec, const ErrorModel& err, int reps,
                                                     std::uint64_t seed);

/// Sample covariance across replicates of sqrt(T) (g*_0, ..., g*_max_lag) computed on
/// contaminated paths. max_lag defaults to p. Requires reps >= 1000.
[[nodiscard]] Eigen::MatrixXd covariance_experiment(const SimSpec& spec, const ErrorModel& err, int reps,
                                                    std::uint64_t seed, int max_lag = -1);

/// Means and SDs (1/(n-1)) of row vectors, summed in index order.
[[nodiscard]] ParameterMoments summarize_rows(const std::vector<std::vector<double>>& rows);

}  // namespace errts
