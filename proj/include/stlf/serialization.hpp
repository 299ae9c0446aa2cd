#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "stlf/diagnostics.hpp"
#include "stlf/estimation.hpp"
#include "stlf/evaluation.hpp"
#include "stlf/forecasting.hpp"
#include "stlf/innovations.hpp"
#include "stlf/sarima_garch.hpp"

namespace stlf {

using Json = nlohmann::ordered_json;

// ---- diagnostics

inline Json to_json(const TestReport& r) {
    return Json{{"method", to_string(r.method)},
                {"statistic", r.statistic},
                {"p_value", r.p_value},
                {"lags_used", r.lags_used}};
}

// ---- innovations

inline Json to_json(const InnovationDist& d) {
    Json j{{"family", to_string(d.family)}};
    if (d.family == Family::SkewNormal) j["shape"] = d.shape;
    if (d.family == Family::StudentT) j["dof"] = d.dof;
    return j;
}

inline InnovationDist innovation_from_json(const Json& j) {
    InnovationDist d;
    d.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("shape") && !j["shape"].is_null()) d.shape = j["shape"].get<double>();
    if (j.contains("dof") && !j["dof"].is_null()) d.dof = j["dof"].get<double>();
    d.validate();
    return d;
}

// ---- model spec / params

inline Json to_json(const ModelSpec& s) {
    return Json{{"ar_lags", s.ar_lags},   {"ma_lags", s.ma_lags}, {"sar_lags", s.sar_lags},
                {"sma_lags", s.sma_lags}, {"season", s.season},   {"d", s.d},
                {"garch_p", s.garch_p},   {"garch_q", s.garch_q}, {"innovation", to_string(s.innovation)}};
}

/// Accepts "innovation" either as a family name or as a distribution object.
inline ModelSpec spec_from_json(const Json& j) {
    ModelSpec s;
    auto lags = [&](const char* key) {
        std::set<int> out;
        if (j.contains(key))
            for (const auto& v : j.at(key)) out.insert(v.get<int>());
        return out;
    };
    s.ar_lags = lags("ar_lags");
    s.ma_lags = lags("ma_lags");
    s.sar_lags = lags("sar_lags");
    s.sma_lags = lags("sma_lags");
    s.season = j.value("season", 24);
    s.d = j.value("d", 0);
    s.garch_p = j.value("garch_p", 1);
    s.garch_q = j.value("garch_q", 1);
    if (j.contains("innovation")) {
        const auto& inn = j.at("innovation");
        s.innovation = inn.is_string() ? parse_family(inn.get<std::string>()) : innovation_from_json(inn).family;
    }
    s.validate();
    return s;
}

namespace detail {

inline Json lag_map_to_json(const LagMap& m) {
    Json j = Json::object();
    for (auto [lag, c] : m) j[std::to_string(lag)] = c;
    return j;
}

inline LagMap lag_map_from_json(const Json& j) {
    LagMap m;
    for (auto it = j.begin(); it != j.end(); ++it) m[std::stoi(it.key())] = it.value().get<double>();
    return m;
}

}  // namespace detail

inline Json to_json(const ModelParams& p) {
    Json j{{"constant", p.constant},
           {"ar", detail::lag_map_to_json(p.ar)},
           {"ma", detail::lag_map_to_json(p.ma)},
           {"sar", detail::lag_map_to_json(p.sar)},
           {"sma", detail::lag_map_to_json(p.sma)},
           {"garch_omega", p.garch_omega},
           {"garch_alpha", p.garch_alpha},
           {"garch_beta", p.garch_beta}};
    j["dist_shape"] = p.dist_shape ? Json(*p.dist_shape) : Json(nullptr);
    return j;
}

inline ModelParams params_from_json(const Json& j) {
    ModelParams p;
    p.constant = j.value("constant", 0.0);
    if (j.contains("ar")) p.ar = detail::lag_map_from_json(j["ar"]);
    if (j.contains("ma")) p.ma = detail::lag_map_from_json(j["ma"]);
    if (j.contains("sar")) p.sar = detail::lag_map_from_json(j["sar"]);
    if (j.contains("sma")) p.sma = detail::lag_map_from_json(j["sma"]);
    p.garch_omega = j.at("garch_omega").get<double>();
    p.garch_alpha = j.at("garch_alpha").get<double>();
    p.garch_beta = j.at("garch_beta").get<double>();
    if (j.contains("dist_shape") && !j["dist_shape"].is_null()) p.dist_shape = j["dist_shape"].get<double>();
    return p;
}

// ---- fitted model

namespace detail {

inline std::string display_name(const std::string& key) {
    auto dot = key.find('.');
    if (dot != std::string::npos) {
        std::string kind = key.substr(0, dot);
        for (auto& c : kind) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return kind + " {" + key.substr(dot + 1) + "}";
    }
    if (key == "constant") return "Constant";
    if (key == "omega") return "Constant";
    if (key == "alpha") return "ARCH{1}";
    if (key == "beta") return "GARCH{1}";
    if (key == "shape") return "Shape";
    if (key == "dof") return "DoF";
    return key;
}

inline Json table_row(const FittedModel& m, const std::string& key, double value) {
    Json row{{"name", display_name(key)}, {"key", key}, {"value", value}};
    auto get = [&](const std::map<std::string, double>& mp) {
        auto it = mp.find(key);
        return it == mp.end() ? Json(nullptr) : Json(it->second);
    };
    row["std_error"] = get(m.std_errors);
    row["t_statistic"] = get(m.t_stats);
    row["p_value"] = get(m.p_values);
    return row;
}

}  // namespace detail

/// Includes mean- and variance-equation tables with Value, Standard Error,
/// T-Statistic and P-Value columns. The filter output is not serialized; it
/// is recomputed from params and data on load.
inline Json to_json(const FittedModel& m) {
    Json mean_table = Json::array(), var_table = Json::array();
    const auto& p = m.params;
    mean_table.push_back(detail::table_row(m, "constant", p.constant));
    for (auto [l, c] : p.ar) mean_table.push_back(detail::table_row(m, "ar." + std::to_string(l), c));
    for (auto [l, c] : p.sar) mean_table.push_back(detail::table_row(m, "sar." + std::to_string(l), c));
    for (auto [l, c] : p.ma) mean_table.push_back(detail::table_row(m, "ma." + std::to_string(l), c));
    for (auto [l, c] : p.sma) mean_table.push_back(detail::table_row(m, "sma." + std::to_string(l), c));
    var_table.push_back(detail::table_row(m, "omega", p.garch_omega));
    var_table.push_back(detail::table_row(m, "beta", p.garch_beta));
    var_table.push_back(detail::table_row(m, "alpha", p.garch_alpha));
    if (p.dist_shape)
        var_table.push_back(
            detail::table_row(m, m.spec.innovation == Family::StudentT ? "dof" : "shape", *p.dist_shape));

    return Json{{"spec", to_json(m.spec)},
                {"params", to_json(m.params)},
                {"loglik", m.loglik},
                {"aic", m.aic},
                {"bic", m.bic},
                {"n_obs", m.n_obs},
                {"num_params", m.num_params},
                {"converged", m.converged},
                {"iterations", m.iterations},
                {"ar_stationary", m.ar_stationary},
                {"ma_invertible", m.ma_invertible},
                {"warnings", m.warnings},
                {"mean_table", mean_table},
                {"variance_table", var_table},
                {"std_errors", m.std_errors},
                {"t_stats", m.t_stats},
                {"p_values", m.p_values}};
}

/// Restores everything but the filter output.
inline FittedModel fitted_from_json(const Json& j) {
    FittedModel m;
    m.spec = spec_from_json(j.at("spec"));
    m.params = params_from_json(j.at("params"));
    validate(m.spec, m.params);
    m.loglik = j.value("loglik", 0.0);
    m.aic = j.value("aic", 0.0);
    m.bic = j.value("bic", 0.0);
    m.n_obs = j.value("n_obs", std::size_t{0});
    m.num_params = j.value("num_params", std::size_t{0});
    m.converged = j.value("converged", true);
    m.iterations = j.value("iterations", std::size_t{0});
    m.ar_stationary = j.value("ar_stationary", true);
    m.ma_invertible = j.value("ma_invertible", true);
    if (j.contains("warnings")) m.warnings = j["warnings"].get<std::vector<std::string>>();
    if (j.contains("std_errors")) m.std_errors = j["std_errors"].get<std::map<std::string, double>>();
    if (j.contains("t_stats")) m.t_stats = j["t_stats"].get<std::map<std::string, double>>();
    if (j.contains("p_values")) m.p_values = j["p_values"].get<std::map<std::string, double>>();
    return m;
}

/// Parameter tables (estimate, SE, t, p) as plain text.
inline std::string format_tables(const FittedModel& m) {
    const Json j = to_json(m);
    std::ostringstream os;
    auto block = [&](const char* title, const Json& rows) {
        os << title << "\n";
        char buf[160];
        std::snprintf(buf, sizeof buf, "  %-12s %12s %15s %12s %10s\n", "", "Value", "Standard Error", "T-Statistic",
                      "P-Value");
        os << buf;
        for (const auto& r : rows) {
            auto num = [](const Json& v, const char* fmt) {
                if (v.is_null()) return std::string("-");
                char b[64];
                std::snprintf(b, sizeof b, fmt, v.get<double>());
                return std::string(b);
            };
            std::snprintf(buf, sizeof buf, "  %-12s %12s %15s %12s %10s\n", r["name"].get<std::string>().c_str(),
                          num(r["value"], "%.4f").c_str(), num(r["std_error"], "%.4f").c_str(),
                          num(r["t_statistic"], "%.3f").c_str(), num(r["p_value"], "%.3f").c_str());
            os << buf;
        }
    };
    block("Mean equation", j["mean_table"]);
    block("Variance equation", j["variance_table"]);
    char buf[160];
    std::snprintf(buf, sizeof buf, "loglik %.4f  AIC %.4f  BIC %.4f  n %zu  k %zu\n", m.loglik, m.aic, m.bic,
                  m.n_obs, m.num_params);
    os << buf;
    return os.str();
}

// ---- forecasts

inline Json to_json(const ForecastResult& f) {
    Json steps = Json::array();
    for (std::size_t j = 0; j < f.horizon; ++j) {
        Json s;
        if (j < f.timestamps.size()) s["timestamp"] = format_timestamp(f.timestamps[j]);
        s["return_mean"] = f.return_mean[j];
        s["return_variance"] = f.return_variance[j];
        s["cond_variance"] = f.cond_variance[j];
        s["log_level_variance"] = f.log_level_variance[j];
        s["level_point"] = f.level_point[j];
        s["level_lower"] = f.level_lower[j];
        s["level_upper"] = f.level_upper[j];
        steps.push_back(std::move(s));
    }
    return Json{{"horizon", f.horizon}, {"coverage", f.coverage}, {"origin_level", f.origin_level}, {"steps", steps}};
}

namespace detail {
inline std::string fmt_num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.10g", v);
    return b;
}
}  // namespace detail

/// timestamp,level_point,level_lower,level_upper
inline void write_forecast_csv(std::ostream& os, const ForecastResult& f) {
    os << "timestamp,level_point,level_lower,level_upper\n";
    for (std::size_t j = 0; j < f.horizon; ++j) {
        os << (j < f.timestamps.size() ? format_timestamp(f.timestamps[j]) : std::to_string(j + 1)) << ','
           << detail::fmt_num(f.level_point[j]) << ',' << detail::fmt_num(f.level_lower[j]) << ','
           << detail::fmt_num(f.level_upper[j]) << '\n';
    }
}

/// timestamp,actual,point,lower,upper; `actual` may be shorter than the
/// horizon (missing entries are left blank).
inline void write_plot_data(std::ostream& os, const ForecastResult& f, const std::vector<double>& actual) {
    os << "timestamp,actual,point,lower,upper\n";
    for (std::size_t j = 0; j < f.horizon; ++j) {
        os << (j < f.timestamps.size() ? format_timestamp(f.timestamps[j]) : std::to_string(j + 1)) << ','
           << (j < actual.size() ? detail::fmt_num(actual[j]) : std::string{}) << ','
           << detail::fmt_num(f.level_point[j]) << ',' << detail::fmt_num(f.level_lower[j]) << ','
           << detail::fmt_num(f.level_upper[j]) << '\n';
    }
}

// ---- evaluation

inline Json to_json(const ScoreReport& r) {
    return Json{{"mse", r.mse}, {"mae", r.mae}, {"n", r.n}, {"per_step_errors", r.per_step_errors}};
}

inline Json to_json(const std::vector<RankedScore>& ranking) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        Json e = to_json(ranking[i].report);
        e["rank"] = i + 1;
        e["name"] = ranking[i].name;
        arr.push_back(std::move(e));
    }
    return Json{{"ranking", arr}};
}

inline std::string format_ranking(const std::vector<RankedScore>& ranking) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-4s %-20s %12s %12s %5s\n", "rank", "model", "mse", "mae", "n");
    os << buf;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%-4zu %-20s %12.4f %12.4f %5zu\n", i + 1, ranking[i].name.c_str(),
                      ranking[i].report.mse, ranking[i].report.mae, ranking[i].report.n);
        os << buf;
    }
    return os.str();
}

}  // namespace stlf
