#pragma once

#include <vector>

#include <Eigen/Dense>

#include "errts/ar_model.hpp"
#include "errts/series.hpp"

namespace errts {

enum class FitMethod { LeastSquares, EstimatingEquations };

struct ArFit {
    ArModel model;
    FitMethod method = FitMethod::EstimatingEquations;
    AutocovSummary summary;
    bool stationary = false;
};

/// Condition number above which Gamma-hat is treated as singular.
inline constexpr double kMaxCondition = 1e12;

/// Least squares on regressors centered by the global sample mean.
/// With `estimate_eta`, eta is set to m4/m2^2 of the residuals; otherwise 3.
[[nodiscard]] ArFit fit_ls(const Series& s, int p, bool estimate_eta = false);

/// Solves phi = Gamma^-1 gamma, phi0 = (1 - sum phi) mu, sigma^2 = g0 - 2 phi'g + phi'Gamma phi.
[[nodiscard]] ArFit fit_ee(const AutocovSummary& summary);

/// Largest absolute residual of the three estimating equations at `model`.
[[nodiscard]] double ee_residual(const AutocovSummary& summary, const ArModel& model);

/// (phi0, phi_1..phi_p, sigma_eps2).
[[nodiscard]] std::vector<double> parameter_vector(const ArModel& model);

/// Max componentwise |fit_ls - fit_ee| over the parameter vector.
[[nodiscard]] double fitted_equivalence_gap(const Series& s, int p);

/// Solves a symmetric p x p system, rejecting it when cond(a) >= kMaxCondition.
[[nodiscard]] Eigen::VectorXd solve_checked(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                            const char* what);

}  // namespace errts
