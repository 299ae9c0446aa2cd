#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stlf/csv.hpp"
#include "stlf/diagnostics.hpp"
#include "stlf/error.hpp"
#include "stlf/estimation.hpp"
#include "stlf/evaluation.hpp"
#include "stlf/forecasting.hpp"
#include "stlf/serialization.hpp"
#include "stlf/series.hpp"

namespace stlf::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kModel = 3 };

struct RunConfig {
    std::string command;
    std::string input_path;
    std::string model_spec_path;
    std::size_t holdout = 0;
    std::size_t horizon = 24;
    double coverage = 0.95;
    std::uint64_t seed = 0;
    std::string output_path;  // empty: stdout (forecast requires a path prefix)
    Criterion criterion = Criterion::Bic;
    std::optional<Family> innovation;
    bool level_correction = false;
    std::size_t lags = 20;  // McLeod-Li lags for diagnose
    std::vector<std::string> forecast_paths;  // evaluate: name=path or path
    std::size_t length = 2000;  // simulate
};

namespace detail {

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

/// Writes `text` to `path`, or to `out` when path is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write '" + path + "'");
    f << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct SpecSettings {
    ModelSpec spec;
    std::optional<double> shape;
    bool pin_shape = false;
};

/// A spec object; "innovation" may be a family name or
/// {"family", "shape"?, "dof"?, "fixed"?}.
inline SpecSettings spec_settings(const Json& j, const RunConfig& cfg) {
    SpecSettings s;
    s.spec = spec_from_json(j);
    if (j.contains("innovation") && j["innovation"].is_object()) {
        const auto& inn = j["innovation"];
        auto dist = innovation_from_json(inn);
        if (inn.contains("shape") || inn.contains("dof")) s.shape = dist.free_parameter();
        s.pin_shape = inn.value("fixed", false);
    }
    if (cfg.innovation && *cfg.innovation != s.spec.innovation) {
        s.spec.innovation = *cfg.innovation;
        s.shape.reset();
        s.pin_shape = false;
    }
    return s;
}

inline std::vector<SpecSettings> candidate_settings(const Json& j, const RunConfig& cfg) {
    const Json& list = j.is_array() ? j : j.contains("candidates") ? j["candidates"] : Json::array({j});
    std::vector<SpecSettings> out;
    for (const auto& c : list) out.push_back(spec_settings(c, cfg));
    if (out.empty()) throw std::invalid_argument("no candidate specs given");
    return out;
}

inline FitOptions fit_options(const SpecSettings& s, std::span<const double> returns, std::uint64_t seed) {
    FitOptions o;
    o.seed = seed;
    o.estimate_shape = !s.pin_shape;
    if (s.shape) {
        auto start = default_start(s.spec, returns);
        start.dist_shape = *s.shape;
        o.start = start;
    }
    return o;
}

struct Data {
    LoadSeries levels;
    ReturnSeries returns;
    std::optional<ReturnSeries> train;
    std::optional<ReturnSeries> test;

    const ReturnSeries& training() const { return train ? *train : returns; }
};

inline Data load_data(const RunConfig& cfg) {
    if (cfg.input_path.empty()) throw std::invalid_argument("--input is required");
    auto levels = read_load_csv(cfg.input_path);
    auto returns = log_returns(levels);
    Data d{std::move(levels), std::move(returns), std::nullopt, std::nullopt};
    if (cfg.holdout > 0) {
        auto [train, test] = split(d.returns, cfg.holdout);
        d.train = std::move(train);
        d.test = std::move(test);
    }
    return d;
}

inline void add_fit_data(Json& j, const ReturnSeries& train) {
    const auto ts = train.timestamps();
    const auto lv = reconstruct_levels(train);
    j["data"] = Json{{"n_returns", train.size()},
                     {"first_timestamp", format_timestamp(train.origin_timestamp())},
                     {"last_timestamp", format_timestamp(ts.back())},
                     {"last_level", lv.back()}};
}

inline int cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
    auto data = load_data(cfg);
    auto levels = data.levels.values();
    auto returns = data.returns.values();
    Json j{{"n_levels", levels.size()},
           {"levels", Json{{"adf", to_json(adf_test(levels))}, {"mcleod_li", to_json(mcleod_li(levels, cfg.lags))}}},
           {"returns",
            Json{{"adf", to_json(adf_test(returns))}, {"mcleod_li", to_json(mcleod_li(returns, cfg.lags))}}}};
    emit(cfg.output_path, dump(j), out);
    return kOk;
}

inline int cmd_fit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.model_spec_path.empty()) throw std::invalid_argument("--spec is required");
    auto data = load_data(cfg);
    auto settings = spec_settings(read_json_file(cfg.model_spec_path), cfg);
    const auto& train = data.training();
    auto fm = fit(settings.spec, train.values(), fit_options(settings, train.values(), cfg.seed));
    Json j = to_json(fm);
    add_fit_data(j, train);
    emit(cfg.output_path, dump(j), out);
    err << format_tables(fm);
    for (const auto& w : fm.warnings) err << "warning: " << w << "\n";
    return kOk;
}

inline int cmd_select(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.model_spec_path.empty()) throw std::invalid_argument("--spec is required");
    auto data = load_data(cfg);
    auto settings = candidate_settings(read_json_file(cfg.model_spec_path), cfg);
    const auto& train = data.training();
    std::vector<ModelSpec> specs;
    for (const auto& s : settings) specs.push_back(s.spec);
    auto res = select_with(specs, train.values(), cfg.criterion, [&](std::size_t i) {
        return fit_options(settings[i], train.values(), cfg.seed + i);
    });
    Json j = to_json(res.best);
    add_fit_data(j, train);
    Json cands = Json::array();
    for (const auto& c : res.candidates) {
        Json e{{"index", c.index}, {"ok", c.ok}, {"num_params", c.num_params}};
        e["criterion"] = c.ok ? Json(c.criterion) : Json(nullptr);
        if (!c.ok) e["error"] = c.error;
        cands.push_back(std::move(e));
    }
    j["selection"] = Json{{"criterion", cfg.criterion == Criterion::Aic ? "aic" : "bic"},
                          {"best_index", res.best_index},
                          {"candidates", cands}};
    emit(cfg.output_path, dump(j), out);
    err << "selected candidate " << res.best_index << "\n" << format_tables(res.best);
    return kOk;
}

/// Fits in-process when --spec holds a ModelSpec, or reuses a saved fit.
inline FittedModel model_for_forecast(const RunConfig& cfg, const ReturnSeries& train) {
    Json j = read_json_file(cfg.model_spec_path);
    if (j.contains("params") && j.contains("spec")) {
        auto fm = fitted_from_json(j);
        fm.filter = filter(fm.spec, fm.params, train.values());
        return fm;
    }
    auto settings = spec_settings(j, cfg);
    return fit(settings.spec, train.values(), fit_options(settings, train.values(), cfg.seed));
}

inline int cmd_forecast(const RunConfig& cfg, std::ostream& out) {
    if (cfg.model_spec_path.empty()) throw std::invalid_argument("--spec is required");
    if (cfg.output_path.empty()) throw std::invalid_argument("forecast needs --output PREFIX");
    auto data = load_data(cfg);
    const auto& train = data.training();
    auto fm = model_for_forecast(cfg, train);
    const auto train_levels = reconstruct_levels(train);
    ForecastOptions fo;
    fo.coverage = cfg.coverage;
    fo.level_correction = cfg.level_correction;
    auto fc = forecast(fm, train.values(), train_levels.back(), cfg.horizon, fo);
    with_hourly_timestamps(fc, train_levels.timestamps().back());

    std::vector<double> actual;
    if (data.test) {
        const auto test_levels = reconstruct_levels(*data.test);
        auto v = test_levels.values();
        actual.assign(v.begin() + 1, v.end());
        if (actual.size() > cfg.horizon) actual.resize(cfg.horizon);
    }

    std::ostringstream csv, plot;
    write_forecast_csv(csv, fc);
    write_plot_data(plot, fc, actual);
    Json j = to_json(fc);
    j["level_correction"] = cfg.level_correction;
    j["warnings"] = fm.warnings;
    emit(cfg.output_path + ".csv", csv.str(), out);
    emit(cfg.output_path + ".json", dump(j), out);
    emit(cfg.output_path + "_plot.csv", plot.str(), out);
    out << "wrote " << cfg.output_path << ".csv, " << cfg.output_path << ".json, " << cfg.output_path
        << "_plot.csv\n";
    return kOk;
}

/// Actuals come from --input (timestamp,load,...). Predictions are any extra
/// numeric columns of that file plus each --forecast file (timestamp and a
/// level_point or second column), matched by timestamp.
inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.input_path.empty()) throw std::invalid_argument("--input is required");
    auto table = read_timed_table(cfg.input_path);
    const auto& actual = table.columns.size() == 1 ? table.data[0] : table.column("load");
    std::map<std::string, std::vector<double>> preds;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        if (table.columns[c] != "load" && table.columns.size() > 1) preds[table.columns[c]] = table.data[c];

    for (const auto& spec : cfg.forecast_paths) {
        auto eq = spec.find('=');
        std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
        std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
        auto ft = read_timed_table(path);
        const auto& col = [&]() -> const std::vector<double>& {
            for (std::size_t c = 0; c < ft.columns.size(); ++c)
                if (ft.columns[c] == "level_point") return ft.data[c];
            return ft.data[0];
        }();
        std::map<Timestamp, double> by_time;
        for (std::size_t i = 0; i < ft.timestamps.size(); ++i) by_time[ft.timestamps[i]] = col[i];
        std::vector<double> aligned;
        for (auto t : table.timestamps) {
            auto it = by_time.find(t);
            if (it == by_time.end())
                throw DataError("forecast '" + name + "' has no value for " + format_timestamp(t));
            aligned.push_back(it->second);
        }
        preds[name] = std::move(aligned);
    }
    if (preds.empty()) throw std::invalid_argument("evaluate: no predictions to score");
    auto ranking = compare(actual, preds);
    emit(cfg.output_path, dump(to_json(ranking)), out);
    if (!cfg.output_path.empty()) out << format_ranking(ranking);
    return kOk;
}

/// Writes a timestamp,load CSV simulated from {"spec", "params",
/// "start_level"?, "start"?}.
inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    if (cfg.model_spec_path.empty()) throw std::invalid_argument("--spec is required");
    Json j = read_json_file(cfg.model_spec_path);
    auto spec = spec_from_json(j.at("spec"));
    auto params = params_from_json(j.at("params"));
    if (cfg.innovation) spec.innovation = *cfg.innovation;
    const double start_level = j.value("start_level", 70.0);
    auto start = parse_timestamp(j.value("start", std::string("2018-01-01T00:00")));
    if (!start) throw std::invalid_argument("bad start timestamp");
    auto path = simulate(spec, params, cfg.length, cfg.seed);
    std::ostringstream os;
    os << "timestamp,load\n";
    double level = start_level;
    os << format_timestamp(*start) << ',' << stlf::detail::fmt_num(level) << '\n';
    for (std::size_t i = 0; i < path.returns.size(); ++i) {
        level *= std::exp(path.returns[i]);
        os << format_timestamp(*start + std::chrono::hours{static_cast<long>(i + 1)}) << ','
           << stlf::detail::fmt_num(level) << '\n';
    }
    emit(cfg.output_path, os.str(), out);
    return kOk;
}

}  // namespace detail

/// Runs one subcommand. Exit codes: 0 success (including flagged
/// non-convergence), 1 usage/config, 2 data, 3 model.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        if (cfg.horizon < 1) throw std::invalid_argument("--horizon must be at least 1");
        if (!(cfg.coverage > 0.0 && cfg.coverage < 1.0)) throw std::invalid_argument("--coverage must lie in (0,1)");
        if (cfg.command == "diagnose") return detail::cmd_diagnose(cfg, out);
        if (cfg.command == "fit") return detail::cmd_fit(cfg, out, err);
        if (cfg.command == "select") return detail::cmd_select(cfg, out, err);
        if (cfg.command == "forecast") return detail::cmd_forecast(cfg, out);
        if (cfg.command == "evaluate") return detail::cmd_evaluate(cfg, out);
        if (cfg.command == "simulate") return detail::cmd_simulate(cfg, out);
        throw std::invalid_argument("unknown command '" + cfg.command + "'");
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << "\n";
        return kModel;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace stlf::cli
