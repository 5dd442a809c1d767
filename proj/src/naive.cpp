#include "errts/naive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "errts/errors.hpp"
#include "errts/estimation.hpp"

namespace errts {

namespace {

void require_stationary_ar1(const ArModel& model) {
    model.validate();
    if (model.p() != 1) throw ModelError("AR(1) model required");
    if (!(std::abs(model.phi[0]) < 1.0)) throw ModelError("nonstationary AR(1): |phi1| must be < 1");
}

}  // namespace

double omega1(double phi1, double sigma_eps2, double alpha1, double sigma_e2) {
    if (!(std::abs(phi1) < 1.0)) throw ModelError("nonstationary AR(1): |phi1| must be < 1");
    const double signal = alpha1 * alpha1 * sigma_eps2;
    const double denom = signal + sigma_e2 * (1.0 - phi1 * phi1);
    if (!(signal > 0.0) || !(denom > 0.0)) throw ModelError("attenuation factor undefined for these variances");
    return signal / denom;
}

double omega2(double phi0, double phi1, double sigma_eps2, double sigma_u2) {
    if (!(std::abs(phi1) < 1.0)) throw ModelError("nonstationary AR(1): |phi1| must be < 1");
    if (!(sigma_eps2 > 0.0)) throw ModelError("attenuation factor needs sigma_eps2 > 0");
    return 1.0 / (1.0 + sigma_u2 + (1.0 + phi1) * sigma_u2 * phi0 * phi0 / ((1.0 - phi1) * sigma_eps2));
}

NaiveLimit naive_limit_ar1_additive(const ArModel& model, const AdditiveError& err) {
    require_stationary_ar1(model);
    err.validate();
    const double phi1 = model.phi[0];
    const double gamma0 = model.sigma_eps2 / (1.0 - phi1 * phi1);
    const double mu = model.phi0 / (1.0 - phi1);
    const double a1sq = err.alpha1 * err.alpha1;
    const double w = omega1(phi1, model.sigma_eps2, err.alpha1, err.sigma_e2);

    NaiveLimit out;
    out.phi_star = {phi1 * w};
    out.phi0_star = (err.alpha0 + err.alpha1 * mu) * (1.0 - phi1 * w);
    // eps*_t carries e_t - phi1* e_{t-1}, two independent terms.
    out.var_eps_star = a1sq * phi1 * phi1 * (1.0 - w) * (1.0 - w) * gamma0 +
                       (1.0 + out.phi_star[0] * out.phi_star[0]) * err.sigma_e2 + a1sq * model.sigma_eps2;
    out.gamma_star = {a1sq * gamma0 + err.sigma_e2, a1sq * phi1 * gamma0};
    return out;
}

NaiveLimit naive_limit_ar1_multiplicative(const ArModel& model, const MultiplicativeError& err) {
    require_stationary_ar1(model);
    err.validate();
    const double phi1 = model.phi[0];
    const double gamma0 = model.sigma_eps2 / (1.0 - phi1 * phi1);
    const double mu = model.phi0 / (1.0 - phi1);
    const double b2 = err.beta0 * err.beta0;
    const double w = omega2(model.phi0, phi1, model.sigma_eps2, err.sigma_u2);

    NaiveLimit out;
    out.phi_star = {phi1 * w};
    out.phi0_star = err.beta0 * model.phi0 / (1.0 - phi1) * (1.0 - w * phi1);
    out.gamma_star = {b2 * ((err.sigma_u2 + 1.0) * gamma0 + err.sigma_u2 * mu * mu), b2 * phi1 * gamma0};
    out.var_eps_star = out.gamma_star[0] - out.phi_star[0] * out.gamma_star[1];
    return out;
}

NaiveLimit naive_limit_arp(const ArModel& model, const ErrorModel& err, std::span<const double> gammas,
                           double mu) {
    model.validate();
    validate(err);
    const int p = model.p();
    if (gammas.size() < static_cast<std::size_t>(p) + 1) throw ModelError("need gamma_0..gamma_p");
    Eigen::MatrixXd big_gamma(p, p);
    Eigen::VectorXd g(p);
    for (int i = 0; i < p; ++i) {
        g(i) = gammas[static_cast<std::size_t>(i) + 1];
        for (int j = 0; j < p; ++j) big_gamma(i, j) = gammas[static_cast<std::size_t>(std::abs(i - j))];
    }
    const double g0 = gammas[0];
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(p, p);

    NaiveLimit out;
    Eigen::VectorXd phi_star;
    double scale2 = 1.0;
    if (const auto* a = std::get_if<AdditiveError>(&err)) {
        const double a2 = a->alpha1 * a->alpha1;
        const Eigen::MatrixXd m = a2 * big_gamma + a->sigma_e2 * eye;
        const Eigen::VectorXd sol = solve_checked(m, g, "singular inflated autocovariance matrix");
        phi_star = a2 * sol;
        out.phi0_star = (1.0 - phi_star.sum()) * (a->alpha0 + a->alpha1 * mu);
        out.var_eps_star = a2 * g0 + a->sigma_e2 - a2 * a2 * g.dot(sol);
        out.gamma_star.push_back(a2 * g0 + a->sigma_e2);
        scale2 = a2;
    } else {
        const auto& m = std::get<MultiplicativeError>(err);
        const double b2 = m.beta0 * m.beta0;
        const Eigen::MatrixXd mat = big_gamma + m.sigma_u2 * (g0 + mu * mu) * eye;
        const Eigen::VectorXd sol = solve_checked(mat, g, "singular inflated autocovariance matrix");
        phi_star = sol;
        out.phi0_star = m.beta0 * (1.0 - phi_star.sum()) * mu;
        out.var_eps_star = b2 * (m.sigma_u2 + 1.0) * g0 + b2 * m.sigma_u2 * mu * mu - b2 * g.dot(sol);
        out.gamma_star.push_back(b2 * ((m.sigma_u2 + 1.0) * g0 + m.sigma_u2 * mu * mu));
        scale2 = b2;
    }
    out.phi_star.assign(phi_star.data(), phi_star.data() + p);
    for (int i = 0; i < p; ++i) out.gamma_star.push_back(scale2 * g(i));
    return out;
}

NaiveLimit naive_limit(const ArModel& model, const ErrorModel& err) {
    const auto gammas = true_autocovariances(model, model.p());
    return naive_limit_arp(model, err, gammas, stationary_mean(model));
}

// ---------------------------------------------------------------------------
// Autocovariance sequences and truncated sums

AutocovSequence AutocovSequence::from_model(const ArModel& model) {
    const int p = model.p();
    auto table = std::make_shared<std::vector<double>>(true_autocovariances(model, p));
    const double g0 = std::abs((*table)[0]);
    constexpr std::size_t kCap = 1u << 24;
    int small_run = 0;
    while (table->size() < kCap && small_run < p + 1) {
        const std::size_t k = table->size();
        double v = 0.0;
        for (int j = 1; j <= p; ++j) v += model.phi[static_cast<std::size_t>(j - 1)] * (*table)[k - static_cast<std::size_t>(j)];
        table->push_back(v);
        small_run = (std::abs(v) <= 1e-30 * g0) ? small_run + 1 : 0;
    }
    return AutocovSequence([table](int lag) {
        const auto i = static_cast<std::size_t>(lag);
        return i < table->size() ? (*table)[i] : 0.0;
    });
}

AutocovSequence AutocovSequence::from_values(std::vector<double> gammas) {
    auto table = std::make_shared<std::vector<double>>(std::move(gammas));
    return AutocovSequence([table](int lag) {
        const auto i = static_cast<std::size_t>(lag);
        return i < table->size() ? (*table)[i] : 0.0;
    });
}

AutocovSequence AutocovSequence::from_function(std::function<double(int)> fn) {
    return AutocovSequence(std::move(fn));
}

namespace {

constexpr int kMaxWindow = 1 << 22;

// Sums term(i) over all integers i. Blocks of doubling width are added until the
// autocovariance mass in the latest block is below tol * gamma_0^2 (scaled by |gamma_0|).
template <class Term>
TruncatedSum truncated_sum(const AutocovSequence& g, int min_window, double tol, Term term) {
    const double g0 = std::abs(g(0));
    int w = std::max(16, min_window);
    double acc = 0.0;
    for (int i = -w; i <= w; ++i) acc += term(i);
    while (true) {
        if (w > kMaxWindow) {
            throw ModelError("autocovariance sequence is not summable within the truncation limit");
        }
        double block = 0.0, mass = 0.0;
        for (int i = w + 1; i <= 2 * w; ++i) {
            block += term(i) + term(-i);
            mass += std::abs(g(i));
        }
        acc += block;
        w *= 2;
        if (mass * g0 <= tol * g0 * g0 || (g0 == 0.0 && mass == 0.0)) break;
    }
    return {acc, w};
}

}  // namespace

TruncatedSum bartlett_sum(const AutocovSequence& g, double eta, int j, int k, double tol) {
    if (j < 0 || k < 0) throw ModelError("negative lag index");
    auto out = truncated_sum(g, 2 * (j + k) + 1, tol, [&](int i) {
        return g(i) * g(i - j + k) + g(i + k) * g(i - j);
    });
    out.value += (eta - 3.0) * g(j) * g(k);
    return out;
}

double bartlett_q(const AutocovSequence& g, double eta, int j, int k, double tol) {
    return bartlett_sum(g, eta, j, k, tol).value;
}

double autocov_total(const AutocovSequence& g, double tol) {
    return truncated_sum(g, 1, tol, [&](int i) { return g(i); }).value;
}

double q1_element(int j, int k, const ArModel& model, const AdditiveError& err, const AutocovSequence& g,
                  double tol) {
    err.validate();
    const int a = std::min(j, k), b = std::max(j, k);
    if (a < 0 || b > model.p()) throw ModelError("Q1 index out of range 0..p");
    const double a2 = err.alpha1 * err.alpha1;
    const double s2 = err.sigma_e2;
    const double q = a2 * a2 * bartlett_q(g, model.eta, a, b, tol);
    if (b == 0) return q + 4.0 * a2 * g(0) * s2 + err.fourth_moment() - s2 * s2;
    if (a == 0) return q + 4.0 * a2 * g(b) * s2;
    if (a != b) return q + 2.0 * a2 * s2 * (g(b - a) + g(a + b));
    return q + 2.0 * a2 * s2 * (g(0) + g(2 * a)) + s2 * s2;
}

// ---------------------------------------------------------------------------
// Moment sets

LagPattern normalize_pattern(std::vector<int> lags) {
    std::sort(lags.begin(), lags.end());
    if (!lags.empty()) {
        const int lo = lags.front();
        for (int& l : lags) l -= lo;
    }
    return lags;
}

std::string pattern_name(const LagPattern& pattern) {
    std::ostringstream os;
    os << "E{";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (i) os << " ";
        os << "D(t+" << pattern[i] << ")";
    }
    os << "}";
    return os.str();
}

void MomentSet::set_central(const std::vector<int>& lags, double value) {
    central_[normalize_pattern(lags)] = value;
}

void MomentSet::set_v(int k, double value) { v_[std::abs(k)] = value; }

double MomentSet::central(const std::vector<int>& lags) const {
    const auto key = normalize_pattern(lags);
    const auto it = central_.find(key);
    if (it == central_.end()) throw ModelError("moment not provided: " + pattern_name(key));
    return it->second;
}

double MomentSet::v(int k) const {
    const auto it = v_.find(std::abs(k));
    if (it == v_.end()) throw ModelError("moment not provided: v_" + std::to_string(std::abs(k)));
    return it->second;
}

namespace {

struct Q2Inputs {
    double s2 = 0.0;   // sigma_u^2
    double u3 = 1.0;   // E u^3
    double u4 = 1.0;   // E u^4
    double w3 = 0.0;   // E (u-1)^3
    double w4 = 0.0;   // E (u-1)^4
    double b4 = 1.0;   // beta0^4
    double mu = 0.0;
};

// Element (j,k) of the asymptotic covariance of sqrt(T) (g*_0..g*_p) under
// X* = beta0 u X. Y_t = beta0 {u_t D_t + mu (u_t - 1)} with D_t = X_t - mu; each term
// is sum_h Cov(Y_0 Y_j, Y_h Y_{h+k}) expanded with u independent of X and i.i.d.
template <class G, class Q, class SumG, class M, class V>
double q2_formula(int j, int k, const Q2Inputs& in, G gamma, Q q, SumG sum_gamma, M m, V v) {
    const int a = std::min(j, k), b = std::max(j, k);
    const double s2 = in.s2, s4 = s2 * s2, mu = in.mu, mu2 = mu * mu;
    if (b == 0) {
        return in.b4 * ((s2 + 1.0) * (s2 + 1.0) * q(0, 0) +
                        (in.u4 - (s2 + 1.0) * (s2 + 1.0)) * m({0, 0, 0, 0}) +
                        4.0 * mu * s2 * (s2 + 1.0) * v(0) +
                        4.0 * mu * (in.u4 - in.u3 - s2 * (s2 + 1.0)) * m({0, 0, 0}) +
                        2.0 * mu2 * (in.u4 - 2.0 * in.u3 + 1.0 - s4) * gamma(0) +
                        4.0 * mu2 * (s4 * sum_gamma() + (in.u4 - 2.0 * in.u3 + s2 + 1.0 - s4) * gamma(0)) +
                        mu2 * mu2 * (in.w4 - s4));
    }
    if (a == 0) {
        return in.b4 * ((s2 + 1.0) * q(0, b) +
                        (in.u3 - s2 - 1.0) * (m({0, 0, 0, b}) + m({0, 0, 0, -b})) +
                        2.0 * mu * s2 * v(b) +
                        mu * (3.0 * in.u3 - 5.0 * s2 - 3.0) * (m({0, 0, -b}) + m({0, 0, b})) +
                        mu2 * (6.0 * in.w3 + 4.0 * s2) * gamma(b));
    }
    if (a != b) {
        return in.b4 * (q(a, b) +
                        s2 * (m({0, 0, a, b}) + m({0, a, a, a + b}) + m({-b, 0, 0, a}) + m({0, a - b, a, a})) +
                        2.0 * mu * s2 * (m({0, a, -b}) + m({0, a, a - b}) + m({0, a, b}) + m({0, a, a + b})) +
                        2.0 * mu2 * s2 * (gamma(b - a) + gamma(a + b)));
    }
    return in.b4 * (q(a, a) + (s4 + 2.0 * s2) * m({0, 0, a, a}) + 2.0 * s2 * m({0, a, a, 2 * a}) +
                     2.0 * mu * s2 * (s2 + 1.0) * (m({0, 0, a}) + m({0, a, a})) +
                     4.0 * mu * s2 * m({0, a, 2 * a}) +
                     mu2 * (2.0 * s2 * (s2 + 1.0) * gamma(0) + 2.0 * s2 * gamma(2 * a) + 4.0 * s4 * gamma(a)) +
                     mu2 * mu2 * s4);
}

Q2Inputs q2_inputs(const ArModel& model, const MultiplicativeError& err) {
    Q2Inputs in;
    in.s2 = err.sigma_u2;
    in.u3 = err.u3();
    in.u4 = err.u4();
    in.w3 = err.centered3();
    in.w4 = err.centered4();
    in.b4 = std::pow(err.beta0, 4);
    in.mu = stationary_mean(model);
    return in;
}

}  // namespace

std::vector<LagPattern> MomentSet::required_patterns(int max_lag) {
    std::set<LagPattern> seen;
    Q2Inputs dummy;
    dummy.mu = 1.0;
    dummy.s2 = 1.0;
    auto zero_g = [](int) { return 0.0; };
    auto zero_q = [](int, int) { return 0.0; };
    auto zero_s = [] { return 0.0; };
    auto rec_m = [&](std::vector<int> lags) {
        seen.insert(normalize_pattern(std::move(lags)));
        return 0.0;
    };
    auto zero_v = [](int) { return 0.0; };
    for (int j = 0; j <= max_lag; ++j)
        for (int k = j; k <= max_lag; ++k) (void)q2_formula(j, k, dummy, zero_g, zero_q, zero_s, rec_m, zero_v);
    return {seen.begin(), seen.end()};
}

std::vector<int> MomentSet::required_v(int max_lag) {
    std::vector<int> out(static_cast<std::size_t>(max_lag) + 1);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

MomentSet gaussian_moments(const ArModel& model, int max_lag) {
    const auto g = AutocovSequence::from_model(model);
    MomentSet out;
    for (const auto& pat : MomentSet::required_patterns(max_lag)) {
        double value = 0.0;
        if (pat.size() == 4) {
            const int a = pat[0], b = pat[1], c = pat[2], d = pat[3];
            value = g(a - b) * g(c - d) + g(a - c) * g(b - d) + g(a - d) * g(b - c);
        } else if (pat.size() == 2) {
            value = g(pat[1] - pat[0]);
        }
        out.set_central(pat, value);
    }
    for (int k : MomentSet::required_v(max_lag)) out.set_v(k, 0.0);
    return out;
}

MomentSet estimate_moments(const Series& s, int max_lag, double window_tol) {
    if (max_lag < 0) throw DataError("negative lag");
    const std::size_t n = s.size();
    if (n < 10 * static_cast<std::size_t>(std::max(max_lag, 1))) {
        throw DataError("series too short for moment estimation: need T >= 10 * max_lag");
    }
    const double mu = mean_hat(s);
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) d[t] = s[t] - mu;

    auto average = [&](const LagPattern& pat) {
        const auto span = static_cast<std::size_t>(pat.back());
        if (span >= n) throw DataError("series too short for lag pattern " + pattern_name(pat));
        double acc = 0.0;
        for (std::size_t t = 0; t + span < n; ++t) {
            double prod = 1.0;
            for (int l : pat) prod *= d[t + static_cast<std::size_t>(l)];
            acc += prod;
        }
        return acc / static_cast<double>(n - span);
    };

    MomentSet out;
    for (const auto& pat : MomentSet::required_patterns(max_lag)) out.set_central(pat, average(pat));

    // Window for v_k: first lag where the sample autocovariance is negligible.
    const double g0 = average({0, 0});
    const int cap = static_cast<int>(std::min<std::size_t>(500, n / 10));
    int window = 0;
    while (window < cap && std::abs(average({0, window + 1})) >= window_tol * g0) ++window;
    ++window;
    for (int k : MomentSet::required_v(max_lag)) {
        double acc = 0.0;
        for (int h = -window; h <= window + k; ++h) acc += average(normalize_pattern({0, k, h}));
        out.set_v(k, acc);
    }
    return out;
}

double q2_element(int j, int k, const ArModel& model, const MultiplicativeError& err, const MomentSet& moments,
                  const AutocovSequence& g, double tol) {
    err.validate();
    const int a = std::min(j, k), b = std::max(j, k);
    if (a < 0 || b > model.p()) throw ModelError("Q2 index out of range 0..p");
    const auto in = q2_inputs(model, err);
    return q2_formula(
        j, k, in, [&](int lag) { return g(lag); },
        [&](int x, int y) { return bartlett_q(g, model.eta, x, y, tol); },
        [&] { return autocov_total(g, tol); },
        [&](std::vector<int> lags) { return moments.central(lags); }, [&](int lag) { return moments.v(lag); });
}

double q2_element(int j, int k, const ArModel& model, const MultiplicativeError& err, const MomentSet& moments,
                  double tol) {
    return q2_element(j, k, model, err, moments, AutocovSequence::from_model(model), tol);
}

Eigen::MatrixXd bartlett_matrix(const ArModel& model, int p, double tol) {
    const auto g = AutocovSequence::from_model(model);
    Eigen::MatrixXd q(p + 1, p + 1);
    for (int j = 0; j <= p; ++j)
        for (int k = j; k <= p; ++k) q(j, k) = q(k, j) = bartlett_q(g, model.eta, j, k, tol);
    return q;
}

Eigen::MatrixXd q1_matrix(const ArModel& model, const AdditiveError& err, int p, double tol) {
    const auto g = AutocovSequence::from_model(model);
    Eigen::MatrixXd q(p + 1, p + 1);
    for (int j = 0; j <= p; ++j)
        for (int k = j; k <= p; ++k) q(j, k) = q(k, j) = q1_element(j, k, model, err, g, tol);
    return q;
}

Eigen::MatrixXd q2_matrix(const ArModel& model, const MultiplicativeError& err, const MomentSet& moments, int p,
                          double tol) {
    const auto g = AutocovSequence::from_model(model);
    Eigen::MatrixXd q(p + 1, p + 1);
    for (int j = 0; j <= p; ++j)
        for (int k = j; k <= p; ++k) q(j, k) = q(k, j) = q2_element(j, k, model, err, moments, g, tol);
    return q;
}

}  // namespace errts
