#pragma once

#include <span>
#include <vector>

namespace errts {

/// X_t = phi0 + sum_j phi_j X_{t-j} + eps_t with Var(eps_t) = sigma_eps2.
struct ArModel {
    double phi0 = 0.0;
    std::vector<double> phi;
    double sigma_eps2 = 1.0;
    /// Innovation kurtosis ratio E(eps^4) / sigma_eps^4; 3 for Gaussian innovations.
    double eta = 3.0;

    [[nodiscard]] int p() const noexcept { return static_cast<int>(phi.size()); }
    /// Throws ModelError when an invariant is broken (p >= 1, sigma_eps2 >= 0, eta >= 1).
    void validate() const;
};

/// Largest modulus among the roots of z^p - phi_1 z^{p-1} - ... - phi_p,
/// computed as eigenvalues of the companion matrix.
[[nodiscard]] double spectral_radius(std::span<const double> phi);

/// True iff every characteristic root lies strictly inside the unit circle.
[[nodiscard]] bool is_stationary(const ArModel& model);

/// phi0 / (1 - sum phi). Requires a stationary model.
[[nodiscard]] double stationary_mean(const ArModel& model);

/// Theoretical autocovariances gamma_0 .. gamma_max_lag of a stationary model,
/// from the Yule-Walker relations.
[[nodiscard]] std::vector<double> true_autocovariances(const ArModel& model, int max_lag);

}  // namespace errts
