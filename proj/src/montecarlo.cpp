#include "errts/montecarlo.hpp"

#include <cmath>
#include <optional>

#include "errts/corrected.hpp"
#include "errts/errors.hpp"
#include "errts/estimation.hpp"
#include "errts/random.hpp"

namespace errts {

Series simulate_ar(const SimSpec& spec) {
    const ArModel& m = spec.model;
    m.validate();
    if (!is_stationary(m)) throw ModelError("cannot simulate a nonstationary AR model");
    if (spec.T == 0) throw DataError("T must be positive");
    const std::size_t p = m.phi.size();
    const std::size_t total = spec.burn_in + spec.T;
    auto gen = keyed_stream(spec.seed, 0x73696dULL);
    std::normal_distribution<double> eps(0.0, std::sqrt(m.sigma_eps2));
    const double mu = stationary_mean(m);

    std::vector<double> x(p + total, mu);
    for (std::size_t t = p; t < x.size(); ++t) {
        double v = m.phi0 + eps(gen);
        for (std::size_t j = 1; j <= p; ++j) v += m.phi[j - 1] * x[t - j];
        x[t] = v;
    }
    return Series(std::vector<double>(x.end() - static_cast<std::ptrdiff_t>(spec.T), x.end()));
}

ParameterMoments summarize_rows(const std::vector<std::vector<double>>& rows) {
    ParameterMoments out;
    out.count = static_cast<int>(rows.size());
    if (rows.empty()) return out;
    const std::size_t k = rows.front().size();
    out.mean.assign(k, 0.0);
    out.sd.assign(k, 0.0);
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (const auto& r : rows) s += r[j];
        const double mean = s / n;
        double ss = 0.0;
        for (const auto& r : rows) ss += (r[j] - mean) * (r[j] - mean);
        out.mean[j] = mean;
        out.sd[j] = rows.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
    return out;
}

namespace {

struct ReplicateSeeds {
    std::uint64_t path;
    std::uint64_t error;
};

ReplicateSeeds replicate_seeds(std::uint64_t seed, std::size_t r) {
    auto gen = keyed_stream(seed, r);
    return {gen(), gen()};
}

}  // namespace

NaiveExperiment naive_limit_experiment(const SimSpec& spec, const ErrorModel& err, int reps, std::uint64_t seed) {
    if (reps < 50) throw ModelError("naive_limit_experiment needs reps >= 50");
    validate(err);
    const int p = spec.model.p();
    std::vector<std::vector<double>> naive(static_cast<std::size_t>(reps));
    std::vector<std::optional<std::vector<double>>> corrected(static_cast<std::size_t>(reps));

    parallel_for(naive.size(), [&](std::size_t r) {
        const auto seeds = replicate_seeds(seed, r);
        SimSpec local = spec;
        local.seed = seeds.path;
        const Series surrogate = contaminate(simulate_ar(local), err, seeds.error);
        naive[r] = parameter_vector(fit_ls(surrogate, p).model);
        try {
            corrected[r] = parameter_vector(fit_corrected(surrogate, p, err).model);
        } catch (const ModelError&) {
        }
    });

    NaiveExperiment out;
    out.reps = reps;
    out.naive = summarize_rows(naive);
    std::vector<std::vector<double>> ok;
    for (auto& c : corrected) {
        if (c) ok.push_back(std::move(*c));
        else ++out.corrected_failures;
    }
    out.corrected = summarize_rows(ok);
    return out;
}

Eigen::MatrixXd covariance_experiment(const SimSpec& spec, const ErrorModel& err, int reps, std::uint64_t seed,
                                      int max_lag) {
    if (reps < 1000) throw ModelError("covariance_experiment needs reps >= 1000");
    validate(err);
    const int lags = max_lag < 0 ? spec.model.p() : max_lag;
    const double root_t = std::sqrt(static_cast<double>(spec.T));
    std::vector<Eigen::VectorXd> rows(static_cast<std::size_t>(reps));

    parallel_for(rows.size(), [&](std::size_t r) {
        const auto seeds = replicate_seeds(seed, r);
        SimSpec local = spec;
        local.seed = seeds.path;
        const Series surrogate = contaminate(simulate_ar(local), err, seeds.error);
        const auto summary = autocov_summary(surrogate, lags);
        rows[r] = Eigen::Map<const Eigen::VectorXd>(summary.gammas.data(), lags + 1) * root_t;
    });

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(lags + 1);
    for (const auto& v : rows) mean += v;
    mean /= static_cast<double>(reps);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(lags + 1, lags + 1);
    for (const auto& v : rows) {
        const Eigen::VectorXd d = v - mean;
        cov += d * d.transpose();
    }
    return cov / static_cast<double>(reps - 1);
}

}  // namespace errts
