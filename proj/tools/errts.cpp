#include <cmath>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "errts/epidemic.hpp"
#include "errts/errors.hpp"
#include "errts/estimation.hpp"
#include "errts/montecarlo.hpp"
#include "errts/pipeline.hpp"
#include "errts/selection.hpp"

using namespace errts;

namespace {

struct Options {
    std::string config;
    std::string input;
    int definition = 1;
    std::string count_basis = "cumulative";
    std::string diff = "auto";
    std::string lag = "auto";
    int p_max = 10;
    std::string error = "additive";
    std::optional<double> alpha0, alpha1, beta0, tau_a;
    double sigma_e2 = 0.0;
    double sigma_u2 = 0.0;
    std::string u_dist = "lognormal";
    std::string grid, grid_e, grid_u;
    int horizon = 5;
    double level = 0.95;
    int boot_reps = 500;
    std::optional<int> block_len;
    int mc_reps = 20000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    std::string interval_scale = "sqrt";
    std::optional<int> adf_lags;
    // simulate
    double phi0 = 0.0;
    std::string phi = "0.5";
    double sigma_eps2 = 1.0;
    std::size_t length = 200;
    std::size_t burn_in = 500;
    std::string start_date = "2020-01-01";
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw DataError(std::string("invalid ") + what + " value '" + item + "'");
        }
    }
    if (out.empty()) throw DataError(std::string(what) + " list is empty");
    return out;
}

double scale_or(const Options& o, const std::optional<double>& explicit_scale, double fallback) {
    if (o.tau_a) return scale_from_asymptomatic_rate(*o.tau_a);
    return explicit_scale.value_or(fallback);
}

UDist u_dist(const Options& o) { return o.u_dist == "gamma" ? UDist::Gamma : UDist::Lognormal; }

Series load_series(const Options& o) {
    if (o.input.empty()) throw DataError("--input is required");
    const auto table = ingest(o.input);
    if (table.generic) return as_series(table);
    return mortality_rate(table, o.definition, o.count_basis == "daily" ? CountBasis::Daily : CountBasis::Cumulative);
}

std::optional<int> parse_auto(const std::string& text, const char* what) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size() && v >= 0) return v;
    } catch (const std::logic_error&) {
    }
    throw DataError(std::string("invalid ") + what + " '" + text + "' (expected auto or a non-negative integer)");
}

SensitivitySpec base_spec(const Options& o) {
    SensitivitySpec spec;
    spec.diff = parse_auto(o.diff, "--diff");
    spec.lag = parse_auto(o.lag, "--lag");
    if (spec.lag && *spec.lag < 1) throw DataError("--lag must be >= 1");
    spec.p_max = o.p_max;
    spec.horizon = o.horizon;
    spec.alpha = 1.0 - o.level;
    spec.interval_scale = o.interval_scale == "literal" ? IntervalScale::Literal : IntervalScale::Sqrt;
    spec.boot_reps = o.boot_reps;
    spec.block_len = o.block_len;
    spec.mc_reps = o.mc_reps;
    spec.seed = o.seed;
    return spec;
}

std::vector<GridPoint> single_point(const Options& o) {
    if (o.error == "multiplicative") {
        return multiplicative_grid({o.sigma_u2}, scale_or(o, o.beta0, 1.0), u_dist(o));
    }
    if (o.error != "additive") throw DataError("--error must be additive or multiplicative here");
    return additive_grid({o.sigma_e2}, o.alpha0.value_or(0.0), scale_or(o, o.alpha1, 1.0));
}

std::vector<GridPoint> sensitivity_grid(const Options& o) {
    // Unscaled runs default to the meta-analysis under-reporting rate.
    Options scaled = o;
    if (!o.tau_a && !o.alpha1 && !o.beta0) scaled.tau_a = kDefaultAsymptomaticRate;
    const double a1 = scale_or(scaled, o.alpha1, 1.0);
    const double b0 = scale_or(scaled, o.beta0, 1.0);
    const double a0 = o.alpha0.value_or(0.0);
    std::vector<GridPoint> grid;
    if (o.error == "additive" || o.error == "both") {
        const std::string text = o.error == "both" ? o.grid_e : (o.grid.empty() ? o.grid_e : o.grid);
        const auto values = text.empty() ? std::vector<double>{0.1, 0.2} : parse_list(text, "grid");
        const auto pts = additive_grid(values, a0, a1);
        grid.insert(grid.end(), pts.begin(), pts.end());
    }
    if (o.error == "multiplicative" || o.error == "both") {
        const std::string text = o.error == "both" ? o.grid_u : (o.grid.empty() ? o.grid_u : o.grid);
        const auto values = text.empty() ? std::vector<double>{0.3, 0.6} : parse_list(text, "grid");
        const auto pts = multiplicative_grid(values, b0, u_dist(o));
        grid.insert(grid.end(), pts.begin(), pts.end());
    }
    if (grid.empty()) throw DataError("--error must be additive, multiplicative or both");
    return grid;
}

std::string render(const AnalysisReport& r, const std::string& format) {
    if (format == "text") return report_text(r);
    if (format == "csv") return report_csv(r);
    return report_json(r);
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw DataError("cannot write output file: " + o.out);
    f << text;
}

Series prepared(const Options& o, const Series& levels) {
    const auto d = parse_auto(o.diff, "--diff");
    if (!d) return screen(levels).series;
    Series s = levels;
    for (int i = 0; i < *d; ++i) s = difference(s);
    return s;
}

nlohmann::ordered_json model_json(const ArModel& m) {
    nlohmann::ordered_json j;
    j["phi0"] = m.phi0;
    j["phi"] = m.phi;
    j["sigma_eps2"] = m.sigma_eps2;
    j["stationary"] = is_stationary(m);
    return j;
}

int run_fit(const Options& o) {
    const Series s = prepared(o, load_series(o));
    const auto lag = parse_auto(o.lag, "--lag");
    const int p = lag ? *lag : select_lag(s, std::min(o.p_max, static_cast<int>(std::ceil(s.size() / 5.0)) - 1));
    nlohmann::ordered_json j;
    j["n_obs"] = s.size();
    j["diff_order"] = s.diff_order();
    j["lag"] = p;
    j["least_squares"] = model_json(fit_ls(s, p).model);
    j["estimating_equations"] = model_json(fit_ee(autocov_summary(s, p)).model);
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_adf(const Options& o) {
    const Series levels = load_series(o);
    const auto d = parse_auto(o.diff, "--diff");
    nlohmann::ordered_json j;
    AdfResult r;
    if (d) {
        Series s = levels;
        for (int i = 0; i < *d; ++i) s = difference(s);
        r = adf_test(s, o.adf_lags);
        j["diff_order"] = *d;
    } else {
        const auto sr = screen(levels);
        r = sr.adf;
        j["diff_order"] = sr.diff_order;
        j["warning"] = sr.warning;
    }
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["lags_used"] = r.lags_used;
    j["n_obs"] = r.n_obs;
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_select(const Options& o) {
    const Series s = prepared(o, load_series(o));
    const int p_max = std::min(o.p_max, static_cast<int>(std::ceil(s.size() / 5.0)) - 1);
    nlohmann::ordered_json j;
    j["n_obs"] = s.size();
    j["diff_order"] = s.diff_order();
    j["lag"] = select_lag(s, p_max);
    nlohmann::ordered_json table = nlohmann::ordered_json::array();
    for (int p = 1; p <= p_max; ++p) table.push_back({{"p", p}, {"aic", aic(s, p, p_max)}});
    j["aic"] = table;
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_simulate(const Options& o) {
    SimSpec spec;
    spec.model.phi0 = o.phi0;
    spec.model.phi = parse_list(o.phi, "phi");
    spec.model.sigma_eps2 = o.sigma_eps2;
    spec.T = o.length;
    spec.burn_in = o.burn_in;
    spec.seed = o.seed;
    Series s = simulate_ar(spec);
    if (o.error == "additive" && (o.sigma_e2 > 0.0 || o.alpha0 || o.alpha1 || o.tau_a)) {
        s = contaminate(s, single_point(o).front().error, o.seed + 1);
    } else if (o.error == "multiplicative" && (o.sigma_u2 > 0.0 || o.beta0 || o.tau_a)) {
        s = contaminate(s, single_point(o).front().error, o.seed + 1);
    }
    const Date start = parse_date(o.start_date);
    std::ostringstream os;
    os << std::setprecision(12) << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_date(start + std::chrono::days{static_cast<int>(i)}) << ',' << s[i] << '\n';
    }
    emit(o, os.str());
    return 0;
}

// Expands a JSON config into "--key value" tokens.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid config file: " + std::string(e.what()));
    }
    if (!j.is_object()) throw DataError("config file must hold a JSON object");
    std::vector<std::string> out;
    for (const auto& [key, value] : j.items()) {
        if (key == "config") continue;
        out.push_back("--" + key);
        if (value.is_string()) {
            out.push_back(value.get<std::string>());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                if (!joined.empty()) joined += ",";
                joined += v.is_string() ? v.get<std::string>() : v.dump();
            }
            out.push_back(joined);
        } else {
            out.push_back(value.dump());
        }
    }
    return out;
}

void add_common(CLI::App* sub, Options& o, bool needs_input) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--config", o.config, "JSON file of flag values; command-line flags take precedence");
    auto* in = sub->add_option("--input", o.input, "CSV with date,cases,deaths or date,value");
    if (!needs_input) in->description("unused");
    sub->add_option("--definition", o.definition, "mortality definition")->check(CLI::IsMember({1, 2, 3}));
    sub->add_option("--count-basis", o.count_basis)->check(CLI::IsMember({"cumulative", "daily"}));
    sub->add_option("--diff", o.diff, "auto, 0 or 1");
    sub->add_option("--lag", o.lag, "auto or N");
    sub->add_option("--p-max", o.p_max, "largest AR order tried by AIC")->check(CLI::PositiveNumber);
    sub->add_option("--error", o.error)->check(CLI::IsMember({"additive", "multiplicative", "both"}));
    sub->add_option("--alpha0", o.alpha0);
    sub->add_option("--alpha1", o.alpha1);
    sub->add_option("--sigma-e2", o.sigma_e2);
    sub->add_option("--beta0", o.beta0);
    sub->add_option("--sigma-u2", o.sigma_u2);
    sub->add_option("--u-dist", o.u_dist)->check(CLI::IsMember({"lognormal", "gamma"}));
    sub->add_option("--tau-a", o.tau_a, "asymptomatic rate; sets alpha1 or beta0 to 1/(1-tau)");
    sub->add_option("--grid", o.grid, "comma-separated error variances");
    sub->add_option("--grid-e", o.grid_e, "additive grid for --error both");
    sub->add_option("--grid-u", o.grid_u, "multiplicative grid for --error both");
    sub->add_option("--horizon", o.horizon)->check(CLI::PositiveNumber);
    sub->add_option("--level", o.level)->check(CLI::Range(0.0, 1.0));
    sub->add_option("--boot-reps", o.boot_reps)->check(CLI::Range(2, 1000000));
    sub->add_option("--block-len", o.block_len)->check(CLI::PositiveNumber);
    sub->add_option("--mc-reps", o.mc_reps, "simulation size for MSPE when p > 1")->check(CLI::Range(100, 100000000));
    sub->add_option("--seed", o.seed);
    sub->add_option("--out", o.out);
    sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("--interval-scale", o.interval_scale)->check(CLI::IsMember({"sqrt", "literal"}));
    sub->add_option("--adf-lags", o.adf_lags)->check(CLI::NonNegativeNumber);
}

int dispatch(const std::string& cmd, Options& o) {
    if (cmd == "fit") return run_fit(o);
    if (cmd == "adf") return run_adf(o);
    if (cmd == "select") return run_select(o);
    if (cmd == "simulate") return run_simulate(o);

    const Series levels = load_series(o);
    SensitivitySpec spec = base_spec(o);
    if (cmd == "correct" || cmd == "forecast") spec.grid = single_point(o);
    if (cmd == "sensitivity") spec.grid = sensitivity_grid(o);
    emit(o, render(analyze(levels, spec), o.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Autoregressive analysis of error-contaminated time series"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"fit", "naive AR fit by least squares and estimating equations"},
        {"naive", "naive analysis with bootstrap SEs and forecasts"},
        {"correct", "corrected fit for one error model"},
        {"forecast", "corrected forecasts for one error model"},
        {"sensitivity", "naive and corrected analyses over an error-variance grid"},
        {"simulate", "simulate an AR series as date,value CSV"},
        {"adf", "augmented Dickey-Fuller test"},
        {"select", "AIC lag selection"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, o, name != "simulate");
        if (name == "simulate") {
            sub->add_option("--phi0", o.phi0);
            sub->add_option("--phi", o.phi, "comma-separated AR coefficients");
            sub->add_option("--sigma-eps2", o.sigma_eps2);
            sub->add_option("--length", o.length, "number of observations")->check(CLI::PositiveNumber);
            sub->add_option("--burn-in", o.burn_in);
            sub->add_option("--start-date", o.start_date);
        }
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // Config values are inserted before user flags so the latter win.
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
            if (path.empty()) continue;
            const auto extra = config_tokens(path);
            args.insert(args.begin() + 1, extra.begin(), extra.end());
            break;
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), o);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
