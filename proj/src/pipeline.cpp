#include "errts/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include "json.hpp"

#include "errts/corrected.hpp"
#include "errts/epidemic.hpp"
#include "errts/errors.hpp"
#include "errts/estimation.hpp"
#include "errts/random.hpp"

namespace errts {

std::vector<GridPoint> additive_grid(const std::vector<double>& sigma_e2, double alpha0, double alpha1) {
    std::vector<GridPoint> out;
    for (double v : sigma_e2) {
        AdditiveError e{.alpha0 = alpha0, .alpha1 = alpha1, .sigma_e2 = v, .e4 = std::nullopt};
        e.validate();
        out.push_back({ErrorKind::Additive, v, e});
    }
    return out;
}

std::vector<GridPoint> multiplicative_grid(const std::vector<double>& sigma_u2, double beta0, UDist dist) {
    std::vector<GridPoint> out;
    for (double v : sigma_u2) {
        MultiplicativeError m{.beta0 = beta0, .sigma_u2 = v, .dist = dist};
        m.validate();
        out.push_back({ErrorKind::Multiplicative, v, m});
    }
    return out;
}

std::optional<double> wald_p_value(double est, double se) {
    if (!(se > 0.0) || !std::isfinite(est)) return std::nullopt;
    const boost::math::normal_distribution<double> z;
    return 2.0 * boost::math::cdf(boost::math::complement(z, std::abs(est / se)));
}

namespace {

struct Context {
    const SensitivitySpec& spec;
    const Series& analysed;
    std::vector<Series> chain;  // levels, first differences, ... up to order d-1
    int p;
    int block_len;
};

std::vector<std::string> parameter_names(int p) {
    std::vector<std::string> names{"phi0"};
    for (int j = 1; j <= p; ++j) names.push_back("phi" + std::to_string(j));
    names.emplace_back("sigma_eps2");
    return names;
}

VariantReport run_variant(const Context& ctx, const ErrorModel& err, std::string label,
                          std::optional<GridPoint> point) {
    VariantReport out;
    out.label = std::move(label);
    out.point = std::move(point);
    out.error_description = describe(err);
    const auto& spec = ctx.spec;
    try {
        const auto summary = autocov_summary(ctx.analysed, ctx.p);
        if (!validate_bounds(err, summary.gammas[0], invert_level(err, summary.mu_hat))) {
            out.status = VariantReport::Status::BoundViolation;
            out.message = "error variance exceeds the bound implied by the observed variance";
            return out;
        }
        const CorrectedFit fit = fit_corrected(ctx.analysed, ctx.p, err);
        const BootstrapResult boot =
            block_bootstrap(ctx.analysed, ctx.p, err, ctx.block_len, spec.boot_reps, spec.seed);
        out.stationary = fit.stationary;
        out.bootstrap_failures = boot.failures;
        const auto est = parameter_vector(fit.model);
        const auto names = parameter_names(ctx.p);
        for (std::size_t i = 0; i < est.size(); ++i) {
            out.parameters.push_back({names[i], est[i], boot.se[i], wald_p_value(est[i], boot.se[i])});
        }
        if (!fit.stationary) {
            out.status = VariantReport::Status::Failed;
            out.message = "corrected fit is nonstationary; forecast MSPE undefined";
            return out;
        }

        const auto x = ctx.analysed.values();
        const std::vector<double> last(x.end() - ctx.p, x.end());
        auto points = forecast(fit.model, adjust_initials(last, err), spec.horizon);
        std::vector<double> pe;
        if (ctx.p == 1) {
            pe = mspe_curve(fit.model, err, spec.horizon);
        } else {
            out.mspe_closed_form = false;
            pe = monte_carlo_mspe_curve(fit.model, err, spec.horizon, spec.mc_reps, spec.seed);
        }
        out.fitted = make_forecast(std::move(points), std::move(pe), spec.alpha, spec.interval_scale);
        out.level = out.fitted;
        out.level.scale = ForecastScale::Level;
        for (auto it = ctx.chain.rbegin(); it != ctx.chain.rend(); ++it) {
            out.level = to_level(out.level, invert_level(err, it->back()), spec.interval_scale);
        }
        for (double v : out.fitted.mspe) out.pe_total += v;
        for (double v : out.level.mspe) out.level_pe_total += v;
    } catch (const ModelError& e) {
        out.status = VariantReport::Status::Failed;
        out.message = e.what();
    } catch (const DataError& e) {
        out.status = VariantReport::Status::Failed;
        out.message = e.what();
    }
    return out;
}

std::string kind_name(ErrorKind k) { return k == ErrorKind::Additive ? "additive" : "multiplicative"; }

std::string status_name(VariantReport::Status s) {
    switch (s) {
        case VariantReport::Status::Ok: return "ok";
        case VariantReport::Status::BoundViolation: return "bound_violation";
        default: return "failed";
    }
}

std::string date_label(const AnalysisReport& r, int h) {
    if (!r.last_date) return "T+" + std::to_string(h);
    return format_date(*r.last_date + std::chrono::days{h});
}

}  // namespace

AnalysisReport analyze(const Series& levels, const SensitivitySpec& spec) {
    if (spec.horizon < 1) throw DataError("horizon must be >= 1");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw DataError("level must be in (0, 1)");
    AnalysisReport report;
    report.n_levels = levels.size();
    if (levels.origin()) report.last_date = *levels.date_at(levels.size() - 1);
    report.horizon = spec.horizon;
    report.alpha = spec.alpha;
    report.interval_scale = spec.interval_scale;
    report.boot_reps = spec.boot_reps;
    report.seed = spec.seed;

    std::vector<Series> chain;
    Series analysed = levels;
    if (spec.diff) {
        if (*spec.diff < 0) throw DataError("differencing order must be >= 0");
        for (int d = 0; d < *spec.diff; ++d) {
            chain.push_back(analysed);
            analysed = difference(analysed);
        }
        report.diff_order = *spec.diff;
        if (analysed.size() >= 15 && !analysed.is_constant()) report.adf = adf_test(analysed);
    } else {
        auto sr = screen(levels, spec.max_diff);
        report.diff_order = sr.diff_order;
        report.adf = sr.adf;
        report.screen_warning = sr.warning;
        Series cur = levels;
        for (int d = 0; d < sr.diff_order; ++d) {
            chain.push_back(cur);
            cur = difference(cur);
        }
        analysed = std::move(sr.series);
    }
    report.n_analysed = analysed.size();

    if (spec.lag) {
        report.lag = *spec.lag;
    } else {
        const int cap = static_cast<int>(std::ceil(static_cast<double>(analysed.size()) / 5.0)) - 1;
        const int p_max = std::min(spec.p_max, cap);
        if (p_max < 1) throw DataError("series too short for lag selection");
        report.lag = select_lag(analysed, p_max);
        report.lag_selected = true;
    }
    report.block_len = spec.block_len.value_or(default_block_length(analysed.size()));

    const Context ctx{spec, analysed, chain, report.lag, report.block_len};
    std::vector<VariantReport> results(spec.grid.size() + 1);
    parallel_for(results.size(), [&](std::size_t i) {
        if (i == 0) {
            results[0] = run_variant(ctx, identity_error(), "naive", std::nullopt);
            return;
        }
        const auto& g = spec.grid[i - 1];
        std::ostringstream label;
        label << kind_name(g.kind) << (g.kind == ErrorKind::Additive ? " sigma_e2=" : " sigma_u2=") << g.value;
        results[i] = run_variant(ctx, g.error, label.str(), g);
    });
    report.naive = std::move(results[0]);
    report.variants.assign(std::make_move_iterator(results.begin() + 1), std::make_move_iterator(results.end()));
    std::stable_sort(report.variants.begin(), report.variants.end(), [](const auto& a, const auto& b) {
        return std::pair(a.point->kind, a.point->value) < std::pair(b.point->kind, b.point->value);
    });
    return report;
}

namespace {

using Json = nlohmann::ordered_json;

Json forecast_json(const AnalysisReport& r, const Forecast& f, double total) {
    Json rows = Json::array();
    for (int h = 1; h <= f.horizon; ++h) {
        const auto i = static_cast<std::size_t>(h - 1);
        rows.push_back({{"h", h},
                        {"date", date_label(r, h)},
                        {"point", f.points[i]},
                        {"pe", f.mspe[i]},
                        {"lo", f.lo[i]},
                        {"hi", f.hi[i]}});
    }
    return {{"scale", f.scale == ForecastScale::Level ? "level" : "differenced"}, {"horizons", rows}, {"pe_total", total}};
}

Json variant_json(const AnalysisReport& r, const VariantReport& v) {
    Json j;
    j["label"] = v.label;
    if (v.point) {
        j["kind"] = kind_name(v.point->kind);
        j["value"] = v.point->value;
    } else {
        j["kind"] = "naive";
        j["value"] = nullptr;
    }
    j["error_model"] = v.error_description;
    j["status"] = status_name(v.status);
    j["message"] = v.message;
    Json params = Json::array();
    for (const auto& p : v.parameters) {
        params.push_back({{"name", p.name},
                          {"est", p.est},
                          {"se", p.se},
                          {"p_value", p.p_value ? Json(*p.p_value) : Json(nullptr)}});
    }
    j["parameters"] = params;
    j["stationary"] = v.stationary;
    j["bootstrap_failures"] = v.bootstrap_failures;
    if (v.status == VariantReport::Status::Ok) {
        j["mspe_method"] = v.mspe_closed_form ? "closed_form" : "monte_carlo";
        j["forecast"] = forecast_json(r, v.fitted, v.pe_total);
        j["level_forecast"] = forecast_json(r, v.level, v.level_pe_total);
    }
    return j;
}

}  // namespace

std::string report_json(const AnalysisReport& r) {
    Json j;
    Json input;
    input["n_levels"] = r.n_levels;
    input["n_analysed"] = r.n_analysed;
    input["last_date"] = r.last_date ? Json(format_date(*r.last_date)) : Json(nullptr);
    input["diff_order"] = r.diff_order;
    if (r.adf) {
        input["adf"] = {{"statistic", r.adf->statistic},
                        {"p_value", r.adf->p_value},
                        {"lags_used", r.adf->lags_used},
                        {"n_obs", r.adf->n_obs}};
    } else {
        input["adf"] = nullptr;
    }
    input["screen_warning"] = r.screen_warning;
    j["input"] = input;
    j["model"] = {{"lag", r.lag}, {"lag_selected_by_aic", r.lag_selected}};
    j["settings"] = {{"horizon", r.horizon},
                     {"level", 1.0 - r.alpha},
                     {"interval_scale", r.interval_scale == IntervalScale::Sqrt ? "sqrt" : "literal"},
                     {"boot_reps", r.boot_reps},
                     {"block_len", r.block_len},
                     {"seed", r.seed}};
    j["naive"] = variant_json(r, r.naive);
    Json vars = Json::array();
    for (const auto& v : r.variants) vars.push_back(variant_json(r, v));
    j["variants"] = vars;
    return j.dump(2) + "\n";
}

std::string report_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << std::fixed;
    os << "observations: " << r.n_levels << " (analysed " << r.n_analysed << ", differencing order "
       << r.diff_order << ")\n";
    if (r.adf) {
        os << "ADF statistic " << std::setprecision(4) << r.adf->statistic << ", p-value " << r.adf->p_value
           << (r.screen_warning ? "  [unit root not rejected]" : "") << "\n";
    }
    os << "AR order: " << r.lag << (r.lag_selected ? " (AIC)" : "") << "; bootstrap " << r.boot_reps
       << " reps, block length " << r.block_len << "\n";

    auto emit = [&](const VariantReport& v) {
        os << "\n== " << v.label << " [" << v.error_description << "]\n";
        if (v.status == VariantReport::Status::BoundViolation) {
            os << "  bound violation: " << v.message << "\n";
            return;
        }
        if (!v.parameters.empty()) {
            os << "  " << std::left << std::setw(12) << "parameter" << std::right << std::setw(12) << "EST"
               << std::setw(12) << "SE" << std::setw(10) << "p-value" << "\n";
            for (const auto& p : v.parameters) {
                os << "  " << std::left << std::setw(12) << p.name << std::right << std::setprecision(4)
                   << std::setw(12) << p.est << std::setw(12) << p.se << std::setw(10);
                if (p.p_value) os << *p.p_value;
                else os << "-";
                os << "\n";
            }
        }
        if (v.status == VariantReport::Status::Failed) {
            os << "  failed: " << v.message << "\n";
            return;
        }
        os << "  " << std::left << std::setw(12) << "date" << std::right << std::setw(12) << "forecast"
           << std::setw(12) << "MSPE" << std::setw(12) << "lo" << std::setw(12) << "hi" << "\n";
        for (int h = 1; h <= v.level.horizon; ++h) {
            const auto i = static_cast<std::size_t>(h - 1);
            os << "  " << std::left << std::setw(12) << date_label(r, h) << std::right << std::setprecision(4)
               << std::setw(12) << v.level.points[i] << std::setw(12) << v.level.mspe[i] << std::setw(12)
               << v.level.lo[i] << std::setw(12) << v.level.hi[i] << "\n";
        }
        os << "  total MSPE " << std::setprecision(4) << v.level_pe_total << "\n";
    };
    emit(r.naive);
    for (const auto& v : r.variants) emit(v);
    return os.str();
}

std::string report_csv(const AnalysisReport& r) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "date,point,pe,lo,hi,variant\n";
    auto emit = [&](const VariantReport& v) {
        if (v.status != VariantReport::Status::Ok) return;
        for (int h = 1; h <= v.level.horizon; ++h) {
            const auto i = static_cast<std::size_t>(h - 1);
            os << date_label(r, h) << ',' << v.level.points[i] << ',' << v.level.mspe[i] << ',' << v.level.lo[i]
               << ',' << v.level.hi[i] << ',' << v.label << '\n';
        }
    };
    emit(r.naive);
    for (const auto& v : r.variants) emit(v);
    return os.str();
}

}  // namespace errts
