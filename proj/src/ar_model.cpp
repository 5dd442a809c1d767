#include "errts/ar_model.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "errts/errors.hpp"

namespace errts {

void ArModel::validate() const {
    if (phi.empty()) throw ModelError("AR order must be at least 1");
    if (!(sigma_eps2 >= 0.0)) throw ModelError("innovation variance must be non-negative");
    if (!(eta >= 1.0)) throw ModelError("kurtosis ratio eta must be at least 1");
    if (!std::isfinite(phi0)) throw ModelError("non-finite drift");
    for (double c : phi)
        if (!std::isfinite(c)) throw ModelError("non-finite AR coefficient");
}

double spectral_radius(std::span<const double> phi) {
    const auto p = static_cast<Eigen::Index>(phi.size());
    if (p == 0) return 0.0;
    if (p == 1) return std::abs(phi[0]);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = phi[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const ArModel& model) {
    if (model.phi.empty()) return false;
    return spectral_radius(model.phi) < 1.0;
}

double stationary_mean(const ArModel& model) {
    if (!is_stationary(model)) throw ModelError("model is not stationary");
    const double s = std::accumulate(model.phi.begin(), model.phi.end(), 0.0);
    return model.phi0 / (1.0 - s);
}

std::vector<double> true_autocovariances(const ArModel& model, int max_lag) {
    model.validate();
    if (!is_stationary(model)) throw ModelError("model is not stationary");
    const int p = model.p();
    // Unknowns gamma_0..gamma_p:  gamma_k - sum_j phi_j gamma_|k-j| = sigma^2 [k == 0].
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p + 1, p + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
    b(0) = model.sigma_eps2;
    for (int k = 0; k <= p; ++k) {
        for (int j = 1; j <= p; ++j) a(k, std::abs(k - j)) -= model.phi[static_cast<std::size_t>(j - 1)];
    }
    const Eigen::VectorXd g = a.partialPivLu().solve(b);
    std::vector<double> out(static_cast<std::size_t>(std::max(max_lag, p)) + 1);
    for (int k = 0; k <= p; ++k) out[static_cast<std::size_t>(k)] = g(k);
    for (std::size_t k = static_cast<std::size_t>(p) + 1; k < out.size(); ++k) {
        double v = 0.0;
        for (int j = 1; j <= p; ++j) v += model.phi[static_cast<std::size_t>(j - 1)] * out[k - static_cast<std::size_t>(j)];
        out[k] = v;
    }
    out.resize(static_cast<std::size_t>(max_lag) + 1);
    return out;
}

}  // namespace errts
