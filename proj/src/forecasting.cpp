#include "errts/forecasting.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "errts/errors.hpp"
#include "errts/random.hpp"

namespace errts {

std::vector<double> adjust_initials(std::span<const double> last_surrogates, const ErrorModel& err) {
    std::vector<double> out;
    out.reserve(last_surrogates.size());
    for (double x : last_surrogates) out.push_back(invert_level(err, x));
    return out;
}

std::vector<double> forecast(const ArModel& model, std::span<const double> initials, int horizon) {
    const int p = model.p();
    if (initials.size() != static_cast<std::size_t>(p)) throw ModelError("need exactly p initial values");
    if (horizon < 1) throw ModelError("horizon must be >= 1");
    std::vector<double> path(initials.begin(), initials.end());
    for (int h = 0; h < horizon; ++h) {
        double x = model.phi0;
        const std::size_t last = path.size() - 1;
        for (int j = 1; j <= p; ++j) x += model.phi[static_cast<std::size_t>(j - 1)] * path[last + 1 - static_cast<std::size_t>(j)];
        path.push_back(x);
    }
    return {path.begin() + p, path.end()};
}

double mspe(const ArModel& model, const ErrorModel& err, int h) {
    if (model.p() != 1) throw ModelError("closed-form MSPE only for p=1; use monte_carlo_mspe");
    if (h < 1) throw ModelError("horizon must be >= 1");
    const double phi = model.phi[0];
    if (!(std::abs(phi) < 1.0)) throw ModelError("closed-form MSPE needs a stationary model");
    validate(err);
    const double phi2 = phi * phi;
    double common = 0.0, pw = 1.0;
    for (int i = 0; i < h; ++i, pw *= phi2) common += pw * model.sigma_eps2;
    const double phi2h = std::pow(phi2, h);
    double initial_var = 0.0;
    if (const auto* a = std::get_if<AdditiveError>(&err)) {
        initial_var = a->sigma_e2 / (a->alpha1 * a->alpha1);
    } else {
        const auto& m = std::get<MultiplicativeError>(err);
        const double mu = model.phi0 / (1.0 - phi);
        initial_var = (model.sigma_eps2 / (1.0 - phi2) + mu * mu) * m.sigma_u2;
    }
    return phi2h * initial_var + common;
}

std::vector<double> mspe_curve(const ArModel& model, const ErrorModel& err, int horizon) {
    std::vector<double> out;
    for (int h = 1; h <= horizon; ++h) out.push_back(mspe(model, err, h));
    return out;
}

std::vector<double> monte_carlo_mspe_curve(const ArModel& model, const ErrorModel& err, int horizon, int reps,
                                           std::uint64_t seed) {
    model.validate();
    validate(err);
    if (reps < 100) throw ModelError("monte_carlo_mspe needs reps >= 100");
    if (horizon < 1) throw ModelError("horizon must be >= 1");
    if (!is_stationary(model)) throw ModelError("monte_carlo_mspe needs a stationary model");

    const int p = model.p();
    const double rho = spectral_radius(model.phi);
    int burn = 50;
    if (rho > 1e-12) burn = std::max(burn, static_cast<int>(std::ceil(std::log(1e-8) / std::log(rho))));
    burn += p;
    const double mu = stationary_mean(model);
    const double sd = std::sqrt(model.sigma_eps2);

    std::vector<std::vector<double>> sq(static_cast<std::size_t>(reps));
    parallel_for(sq.size(), [&](std::size_t r) {
        auto gen = keyed_stream(seed, r);
        std::normal_distribution<double> eps(0.0, sd);
        std::vector<double> x(static_cast<std::size_t>(p), mu);
        auto step = [&] {
            double v = model.phi0 + eps(gen);
            const std::size_t last = x.size() - 1;
            for (int j = 1; j <= p; ++j) v += model.phi[static_cast<std::size_t>(j - 1)] * x[last + 1 - static_cast<std::size_t>(j)];
            x.push_back(v);
        };
        for (int t = 0; t < burn; ++t) step();
        std::vector<double> observed(x.end() - p, x.end());
        contaminate_values(observed, err, gen);
        const auto pred = forecast(model, adjust_initials(observed, err), horizon);
        const std::size_t origin = x.size();
        for (int h = 0; h < horizon; ++h) step();
        auto& out = sq[r];
        out.resize(static_cast<std::size_t>(horizon));
        for (int h = 0; h < horizon; ++h) {
            const double d = pred[static_cast<std::size_t>(h)] - x[origin + static_cast<std::size_t>(h)];
            out[static_cast<std::size_t>(h)] = d * d;
        }
    });

    std::vector<double> total(static_cast<std::size_t>(horizon), 0.0);
    for (const auto& row : sq)
        for (std::size_t h = 0; h < row.size(); ++h) total[h] += row[h];
    for (double& v : total) v /= reps;
    return total;
}

double monte_carlo_mspe(const ArModel& model, const ErrorModel& err, int h, int reps, std::uint64_t seed) {
    return monte_carlo_mspe_curve(model, err, h, reps, seed).back();
}

double normal_quantile_upper(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ModelError("alpha must be in (0, 1)");
    return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), alpha / 2.0));
}

std::pair<double, double> prediction_interval(double point, double pe, double alpha, IntervalScale scale) {
    if (!(pe >= 0.0)) throw ModelError("prediction error must be non-negative");
    const double q = normal_quantile_upper(alpha);
    const double half = q * (scale == IntervalScale::Sqrt ? std::sqrt(pe) : pe);
    return {point - half, point + half};
}

Forecast make_forecast(std::vector<double> points, std::vector<double> mspe_values, double alpha,
                       IntervalScale scale, ForecastScale kind) {
    if (points.size() != mspe_values.size()) throw ModelError("points and MSPE lengths differ");
    Forecast f;
    f.horizon = static_cast<int>(points.size());
    f.alpha = alpha;
    f.scale = kind;
    for (std::size_t h = 0; h < points.size(); ++h) {
        const auto [lo, hi] = prediction_interval(points[h], mspe_values[h], alpha, scale);
        f.lo.push_back(lo);
        f.hi.push_back(hi);
    }
    f.points = std::move(points);
    f.mspe = std::move(mspe_values);
    return f;
}

Forecast to_level(const Forecast& diffs, double anchor, IntervalScale scale) {
    std::vector<double> points, pe;
    double level = anchor, acc = 0.0;
    for (std::size_t h = 0; h < diffs.points.size(); ++h) {
        level += diffs.points[h];
        acc += diffs.mspe[h];
        points.push_back(level);
        pe.push_back(acc);
    }
    return make_forecast(std::move(points), std::move(pe), diffs.alpha, scale, ForecastScale::Level);
}

}  // namespace errts
