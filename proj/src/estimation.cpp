#include "errts/estimation.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "errts/errors.hpp"

namespace errts {

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* what) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond < kMaxCondition)) {
        std::ostringstream msg;
        msg << what << " (condition estimate " << cond << ")";
        throw ConditioningError(msg.str(), cond);
    }
    return a.partialPivLu().solve(b);
}

std::vector<double> parameter_vector(const ArModel& model) {
    std::vector<double> v;
    v.reserve(model.phi.size() + 2);
    v.push_back(model.phi0);
    v.insert(v.end(), model.phi.begin(), model.phi.end());
    v.push_back(model.sigma_eps2);
    return v;
}

ArFit fit_ls(const Series& s, int p, bool estimate_eta) {
    if (p < 1) throw DataError("AR order must be at least 1");
    const std::size_t n = s.size();
    if (n < 5 * static_cast<std::size_t>(p)) throw DataError("series too short: need T >= 5p");
    if (s.is_constant()) throw DataError("constant series: AR coefficients undefined");

    const double mu = mean_hat(s);
    const auto x = s.values();
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd row(p);
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
        for (int j = 1; j <= p; ++j) row(j - 1) = x[t - static_cast<std::size_t>(j)] - mu;
        xtx.selfadjointView<Eigen::Lower>().rankUpdate(row);
        xty += row * (x[t] - mu);
    }
    xtx = xtx.selfadjointView<Eigen::Lower>();
    const Eigen::VectorXd phi = solve_checked(xtx, xty, "singular normal equations");

    ArFit fit;
    fit.method = FitMethod::LeastSquares;
    fit.summary = autocov_summary(s, p);
    fit.model.phi.assign(phi.data(), phi.data() + p);
    fit.model.phi0 = mu * (1.0 - phi.sum());

    double ss = 0.0, m2 = 0.0, m4 = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
        double r = x[t] - mu;
        for (int j = 1; j <= p; ++j) r -= phi(j - 1) * (x[t - static_cast<std::size_t>(j)] - mu);
        ss += r * r;
        m4 += r * r * r * r;
    }
    const double m = static_cast<double>(n - static_cast<std::size_t>(p));
    fit.model.sigma_eps2 = ss / m;
    m2 = ss / m;
    fit.model.eta = (estimate_eta && m2 > 0.0) ? std::max(1.0, (m4 / m) / (m2 * m2)) : 3.0;
    fit.stationary = is_stationary(fit.model);
    return fit;
}

ArFit fit_ee(const AutocovSummary& summary) {
    const int p = summary.p();
    if (p < 1) throw DataError("AR order must be at least 1");
    const Eigen::MatrixXd gamma_mat = summary.toeplitz();
    const Eigen::VectorXd gamma_vec = summary.lagged();
    const Eigen::VectorXd phi = solve_checked(gamma_mat, gamma_vec, "ill-conditioned autocovariance matrix");

    ArFit fit;
    fit.method = FitMethod::EstimatingEquations;
    fit.summary = summary;
    fit.model.phi.assign(phi.data(), phi.data() + p);
    fit.model.phi0 = (1.0 - phi.sum()) * summary.mu_hat;
    const double s2 = summary.gammas[0] - 2.0 * phi.dot(gamma_vec) + phi.dot(gamma_mat * phi);
    if (s2 < 0.0) throw ModelError("estimating equations give a negative innovation variance");
    fit.model.sigma_eps2 = s2;
    fit.stationary = is_stationary(fit.model);
    return fit;
}

double ee_residual(const AutocovSummary& summary, const ArModel& model) {
    const int p = summary.p();
    const Eigen::MatrixXd g = summary.toeplitz();
    const Eigen::VectorXd gv = summary.lagged();
    const Eigen::Map<const Eigen::VectorXd> phi(model.phi.data(), p);
    const double r1 = (g * phi - gv).cwiseAbs().maxCoeff();
    const double r2 = std::abs(model.phi0 - (1.0 - phi.sum()) * summary.mu_hat);
    const double r3 = std::abs(model.sigma_eps2 -
                               (summary.gammas[0] - 2.0 * phi.dot(gv) + phi.dot(g * phi)));
    return std::max({r1, r2, r3});
}

double fitted_equivalence_gap(const Series& s, int p) {
    const auto ls = parameter_vector(fit_ls(s, p).model);
    const auto ee = parameter_vector(fit_ee(autocov_summary(s, p)).model);
    double gap = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) gap = std::max(gap, std::abs(ls[i] - ee[i]));
    return gap;
}

}  // namespace errts
