#include "errts/error_models.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "errts/errors.hpp"
#include "errts/random.hpp"

namespace errts {

void AdditiveError::validate() const {
    if (alpha1 == 0.0 || !std::isfinite(alpha1)) throw ModelError("alpha1 must be a nonzero finite value");
    if (!std::isfinite(alpha0)) throw ModelError("alpha0 must be finite");
    if (!(sigma_e2 >= 0.0)) throw ModelError("sigma_e2 must be non-negative");
    if (fourth_moment() < sigma_e2 * sigma_e2) throw ModelError("E(e^4) must be at least sigma_e2^2");
}

double MultiplicativeError::moment(int n) const {
    if (n <= 0) return 1.0;
    const double v = sigma_u2;
    switch (dist) {
        case UDist::Lognormal:
            // mean one: E(u^n) = (1 + v)^{n(n-1)/2}
            return std::pow(1.0 + v, 0.5 * n * (n - 1));
        case UDist::Gamma: {
            // shape 1/v, scale v: E(u^n) = prod_{i<n} (1 + i v)
            double m = 1.0;
            for (int i = 0; i < n; ++i) m *= 1.0 + i * v;
            return m;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double MultiplicativeError::centered3() const { return u3() - 3.0 * moment(2) + 3.0 - 1.0; }

double MultiplicativeError::centered4() const {
    return u4() - 4.0 * u3() + 6.0 * moment(2) - 4.0 + 1.0;
}

void MultiplicativeError::validate() const {
    if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw ModelError("beta0 must be positive");
    if (!(sigma_u2 >= 0.0) || !std::isfinite(sigma_u2)) throw ModelError("sigma_u2 must be non-negative");
    if (u4() < std::pow(1.0 + sigma_u2, 2)) throw ModelError("inconsistent moments for u");
}

ErrorModel identity_error() { return AdditiveError{}; }

bool is_identity(const ErrorModel& err) {
    if (const auto* a = std::get_if<AdditiveError>(&err))
        return a->alpha0 == 0.0 && a->alpha1 == 1.0 && a->sigma_e2 == 0.0;
    const auto& m = std::get<MultiplicativeError>(err);
    return m.beta0 == 1.0 && m.sigma_u2 == 0.0;
}

void validate(const ErrorModel& err) {
    std::visit([](const auto& e) { e.validate(); }, err);
}

std::string describe(const ErrorModel& err) {
    std::ostringstream os;
    if (const auto* a = std::get_if<AdditiveError>(&err)) {
        os << "additive(alpha0=" << a->alpha0 << ", alpha1=" << a->alpha1 << ", sigma_e2=" << a->sigma_e2 << ")";
    } else {
        const auto& m = std::get<MultiplicativeError>(err);
        os << "multiplicative(beta0=" << m.beta0 << ", sigma_u2=" << m.sigma_u2 << ", u="
           << (m.dist == UDist::Lognormal ? "lognormal" : "gamma") << ")";
    }
    return os.str();
}

double scale_from_asymptomatic_rate(double tau_a) {
    if (!(tau_a >= 0.0 && tau_a < 1.0)) throw ModelError("asymptomatic rate must lie in [0, 1)");
    return 1.0 / (1.0 - tau_a);
}

double surrogate_mean(const ErrorModel& err, double mu) {
    if (const auto* a = std::get_if<AdditiveError>(&err)) return a->alpha0 + a->alpha1 * mu;
    return std::get<MultiplicativeError>(err).beta0 * mu;
}

double surrogate_var(const ErrorModel& err, double gamma0, double mu) {
    if (const auto* a = std::get_if<AdditiveError>(&err)) return a->alpha1 * a->alpha1 * gamma0 + a->sigma_e2;
    const auto& m = std::get<MultiplicativeError>(err);
    return m.beta0 * m.beta0 * ((m.sigma_u2 + 1.0) * gamma0 + m.sigma_u2 * mu * mu);
}

bool validate_bounds(const ErrorModel& err, double observed_var_star, double mu) {
    if (const auto* a = std::get_if<AdditiveError>(&err)) return a->sigma_e2 < observed_var_star;
    const auto& m = std::get<MultiplicativeError>(err);
    if (m.sigma_u2 == 0.0) return true;
    const double denom = m.beta0 * m.beta0 * mu * mu;
    if (denom == 0.0) return true;
    return m.sigma_u2 < observed_var_star / denom;
}

void contaminate_values(std::span<double> values, const ErrorModel& err, std::mt19937_64& rng) {
    if (const auto* a = std::get_if<AdditiveError>(&err)) {
        if (a->sigma_e2 > 0.0) {
            std::normal_distribution<double> noise(0.0, std::sqrt(a->sigma_e2));
            for (double& x : values) x = a->alpha0 + a->alpha1 * x + noise(rng);
        } else {
            for (double& x : values) x = a->alpha0 + a->alpha1 * x;
        }
    } else {
        const auto& m = std::get<MultiplicativeError>(err);
        if (m.sigma_u2 == 0.0) {
            for (double& x : values) x *= m.beta0;
        } else if (m.dist == UDist::Lognormal) {
            const double s2 = std::log1p(m.sigma_u2);
            std::lognormal_distribution<double> u(-0.5 * s2, std::sqrt(s2));
            for (double& x : values) x = m.beta0 * u(rng) * x;
        } else {
            std::gamma_distribution<double> u(1.0 / m.sigma_u2, m.sigma_u2);
            for (double& x : values) x = m.beta0 * u(rng) * x;
        }
    }
}

Series contaminate(const Series& s, const ErrorModel& err, std::uint64_t seed) {
    validate(err);
    auto rng = keyed_stream(seed, 0x636f6e74ULL);
    std::vector<double> out(s.values().begin(), s.values().end());
    contaminate_values(out, err, rng);
    return Series(std::move(out), s.origin(), s.diff_order());
}

double invert_level(const ErrorModel& err, double x_star) {
    if (const auto* a = std::get_if<AdditiveError>(&err)) return (x_star - a->alpha0) / a->alpha1;
    return x_star / std::get<MultiplicativeError>(err).beta0;
}

}  // namespace errts
