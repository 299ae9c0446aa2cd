#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stlf/error.hpp"

namespace stlf {

struct ScoreReport {
    double mse = 0.0;
    double mae = 0.0;
    std::size_t n = 0;
    std::vector<double> per_step_errors;  // actual - predicted
};

/// Mean squared and mean absolute error.
inline ScoreReport score(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size())
        throw DataError("score: " + std::to_string(actual.size()) + " actuals vs " +
                        std::to_string(predicted.size()) + " predictions");
    if (actual.empty()) throw DataError("score: empty input");
    ScoreReport r;
    r.n = actual.size();
    r.per_step_errors.resize(r.n);
    for (std::size_t i = 0; i < r.n; ++i) {
        const double e = actual[i] - predicted[i];
        r.per_step_errors[i] = e;
        r.mse += e * e;
        r.mae += std::abs(e);
    }
    r.mse /= static_cast<double>(r.n);
    r.mae /= static_cast<double>(r.n);
    return r;
}

struct RankedScore {
    std::string name;
    ScoreReport report;
};

/// Scores every named prediction and ranks ascending by mse, then mae.
inline std::vector<RankedScore> compare(std::span<const double> actual,
                                        const std::map<std::string, std::vector<double>>& predictions) {
    std::vector<RankedScore> out;
    out.reserve(predictions.size());
    for (const auto& [name, pred] : predictions) out.push_back({name, score(actual, pred)});
    std::stable_sort(out.begin(), out.end(), [](const RankedScore& a, const RankedScore& b) {
        if (a.report.mse != b.report.mse) return a.report.mse < b.report.mse;
        return a.report.mae < b.report.mae;
    });
    return out;
}

}  // namespace stlf
