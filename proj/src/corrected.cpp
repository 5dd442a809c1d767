#include "errts/corrected.hpp"

#include <cmath>

#include "errts/errors.hpp"
#include "errts/estimation.hpp"
#include "errts/random.hpp"

namespace errts {

AutocovSummary corrected_moments(const AutocovSummary& surrogate, const ErrorModel& err) {
    validate(err);
    if (surrogate.gammas.empty()) throw DataError("empty autocovariance summary");
    AutocovSummary out = surrogate;
    if (const auto* a = std::get_if<AdditiveError>(&err)) {
        const double a2 = a->alpha1 * a->alpha1;
        out.mu_hat = (surrogate.mu_hat - a->alpha0) / a->alpha1;
        out.gammas[0] = (surrogate.gammas[0] - a->sigma_e2) / a2;
        for (std::size_t k = 1; k < out.gammas.size(); ++k) out.gammas[k] = surrogate.gammas[k] / a2;
    } else {
        const auto& m = std::get<MultiplicativeError>(err);
        const double b2 = m.beta0 * m.beta0;
        const double s2 = m.sigma_u2;
        out.mu_hat = surrogate.mu_hat / m.beta0;
        out.gammas[0] = surrogate.gammas[0] / ((1.0 + s2) * b2) - s2 * out.mu_hat * out.mu_hat / (s2 + 1.0);
        for (std::size_t k = 1; k < out.gammas.size(); ++k) out.gammas[k] = surrogate.gammas[k] / b2;
    }
    if (!(out.gammas[0] > 0.0)) {
        throw ModelError("overcorrection: error variance too large for observed variability");
    }
    return out;
}

CorrectedFit fit_corrected(const Series& surrogate, int p, const ErrorModel& err) {
    if (p < 1) throw DataError("AR order must be at least 1");
    if (surrogate.size() < 5 * static_cast<std::size_t>(p)) throw DataError("series too short: need T >= 5p");
    CorrectedFit out{.model = {},
                     .corrected_summary = {},
                     .surrogate_summary = autocov_summary(surrogate, p),
                     .error_model = err,
                     .n_obs = surrogate.size(),
                     .stationary = true};
    out.corrected_summary = corrected_moments(out.surrogate_summary, err);
    const ArFit f = fit_ee(out.corrected_summary);
    out.model = f.model;
    out.stationary = f.stationary;
    return out;
}

int default_block_length(std::size_t n) {
    int b = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(n))));
    // Guard against cbrt rounding just above an exact cube.
    if (b > 1 && static_cast<std::size_t>(b - 1) * (b - 1) * (b - 1) >= n) --b;
    return std::max(1, b);
}

BootstrapResult block_bootstrap(const Series& surrogate, int p, const ErrorModel& err, int block_len, int n_reps,
                                std::uint64_t seed, bool keep_replicates) {
    const std::size_t n = surrogate.size();
    if (block_len < 1 || static_cast<std::size_t>(block_len) > n) throw DataError("block length must be in 1..T");
    if (n_reps < 2) throw DataError("bootstrap needs at least 2 replicates");

    const auto x = surrogate.values();
    const auto b = static_cast<std::size_t>(block_len);
    std::vector<std::optional<std::vector<double>>> est(static_cast<std::size_t>(n_reps));

    parallel_for(est.size(), [&](std::size_t r) {
        auto gen = keyed_stream(seed, r);
        std::uniform_int_distribution<std::size_t> start(0, n - b);
        std::vector<double> resampled;
        resampled.reserve(n + b);
        while (resampled.size() < n) {
            const std::size_t i = start(gen);
            resampled.insert(resampled.end(), x.begin() + static_cast<std::ptrdiff_t>(i),
                             x.begin() + static_cast<std::ptrdiff_t>(i + b));
        }
        resampled.resize(n);
        try {
            est[r] = parameter_vector(fit_corrected(Series(std::move(resampled)), p, err).model);
        } catch (const ModelError&) {
        } catch (const DataError&) {
        }
    });

    BootstrapResult out;
    out.n_reps = n_reps;
    out.block_len = block_len;
    std::vector<std::vector<double>> ok;
    for (auto& e : est) {
        if (e) ok.push_back(std::move(*e));
        else ++out.failures;
    }
    if (out.failures * 10 > n_reps) {
        throw ModelError("block bootstrap: " + std::to_string(out.failures) + " of " + std::to_string(n_reps) +
                         " replicates failed to fit");
    }
    if (ok.size() < 2) throw ModelError("block bootstrap: fewer than 2 successful replicates");

    const std::size_t k = ok.front().size();
    out.variances.assign(k, 0.0);
    out.se.assign(k, 0.0);
    const double m = static_cast<double>(ok.size());
    for (std::size_t j = 0; j < k; ++j) {
        double mean = 0.0;
        for (const auto& v : ok) mean += v[j];
        mean /= m;
        double ss = 0.0;
        for (const auto& v : ok) ss += (v[j] - mean) * (v[j] - mean);
        out.variances[j] = ss / m;
        out.se[j] = std::sqrt(out.variances[j]);
    }
    if (keep_replicates) out.replicates = std::move(ok);
    return out;
}

Eigen::MatrixXd corrected_jacobian(const CorrectedFit& fit) {
    const auto& base = fit.surrogate_summary;
    const int p = base.p();
    const double h = 1e-5 * std::abs(base.gammas[0]);
    if (!(h > 0.0)) throw ModelError("surrogate gamma_0 must be positive");
    auto phi_at = [&](const AutocovSummary& s) {
        const auto c = corrected_moments(s, fit.error_model);
        return solve_checked(c.toeplitz(), c.lagged(), "ill-conditioned autocovariance matrix");
    };
    Eigen::MatrixXd g(p, p + 1);
    for (int j = 0; j <= p; ++j) {
        AutocovSummary up = base, down = base;
        up.gammas[static_cast<std::size_t>(j)] += h;
        down.gammas[static_cast<std::size_t>(j)] -= h;
        g.col(j) = (phi_at(up) - phi_at(down)) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd sandwich_cov(const CorrectedFit& fit, const Eigen::MatrixXd& q) {
    const int p = fit.surrogate_summary.p();
    if (q.rows() != p + 1 || q.cols() != p + 1) throw ModelError("Q must be (p+1) x (p+1)");
    if ((q - q.transpose()).norm() > 1e-6 * q.norm()) throw ModelError("Q must be symmetric");
    if (fit.n_obs == 0) throw ModelError("fit has no observations");
    const Eigen::MatrixXd g = corrected_jacobian(fit);
    return g * q * g.transpose() / static_cast<double>(fit.n_obs);
}

}  // namespace errts
