#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "stlf/forecasting.hpp"

using namespace stlf;

namespace {

FittedModel model_of(const ModelSpec& spec, const ModelParams& params) {
    FittedModel fm;
    fm.spec = spec;
    fm.params = params;
    return fm;
}

ModelParams table2_garch() {
    ModelParams p;
    p.garch_omega = 0.370;
    p.garch_alpha = 0.562;
    p.garch_beta = 0.250;
    return p;
}

ModelSpec seasonal_spec() {
    ModelSpec s;
    s.ar_lags = {2};
    s.ma_lags = {3};
    s.sar_lags = {24};
    s.sma_lags = {24};
    return s;
}

ModelParams seasonal_params() {
    auto p = table2_garch();
    p.constant = 0.001;
    p.ar = {{2, 0.228}};
    p.ma = {{3, 0.029}};
    p.sar = {{24, 0.345}};
    p.sma = {{24, -0.878}};
    return p;
}

// Simulated continuations of `returns` under the model; returns h-step
// return paths, one per row.
std::vector<std::vector<double>> continuations(const ModelSpec& spec, const ModelParams& p,
                                               const std::vector<double>& returns, std::size_t h,
                                               std::size_t paths, std::uint64_t seed) {
    const auto f = filter(spec, p, returns);
    const auto op = combined_operator(spec, p);
    const std::size_t lag = static_cast<std::size_t>(op.max_lag());
    const auto eps = sample(innovation_dist(spec, p), paths * h, seed);
    std::vector<std::vector<double>> out(paths, std::vector<double>(h));
    for (std::size_t k = 0; k < paths; ++k) {
        std::vector<double> y(returns.end() - static_cast<std::ptrdiff_t>(lag), returns.end());
        std::vector<double> a(f.residuals.end() - static_cast<std::ptrdiff_t>(lag), f.residuals.end());
        double s2 = f.cond_variance.back(), a_prev = f.residuals.back();
        for (std::size_t j = 0; j < h; ++j) {
            s2 = p.garch_omega + p.garch_alpha * a_prev * a_prev + p.garch_beta * s2;
            const double shock = eps[k * h + j] * std::sqrt(s2);
            double v = p.constant + shock;
            const std::size_t t = y.size();
            for (auto [l, c] : op.ar) v += c * y[t - static_cast<std::size_t>(l)];
            for (auto [l, c] : op.ma) v += c * a[t - static_cast<std::size_t>(l)];
            y.push_back(v);
            a.push_back(shock);
            a_prev = shock;
            out[k][j] = v;
        }
    }
    return out;
}

}  // namespace

TEST(PsiWeights, PureMa) {
    ModelSpec s;
    s.ma_lags = {1, 3};
    ModelParams p;
    p.ma = {{1, 0.4}, {3, -0.2}};
    auto psi = psi_weights(s, p, 6);
    EXPECT_EQ(psi, (std::vector<double>{1.0, 0.4, 0.0, -0.2, 0.0, 0.0}));
}

TEST(PsiWeights, Ar1Geometric) {
    ModelSpec s;
    s.ar_lags = {1};
    ModelParams p;
    p.ar = {{1, 0.5}};
    auto psi = psi_weights(s, p, 20);
    for (std::size_t j = 0; j < psi.size(); ++j) EXPECT_NEAR(psi[j], std::pow(0.5, j), 1e-15);
}

TEST(PsiWeights, RejectsNonStationary) {
    ModelSpec s;
    s.ar_lags = {1};
    ModelParams p;
    p.ar = {{1, 1.0}};
    EXPECT_THROW(psi_weights(s, p, 5), ConstraintViolation);
}

TEST(Forecast, ConstantMeanClosedForm) {
    ModelSpec s;
    ModelParams p;
    p.constant = 0.002;
    p.garch_omega = 0.5;
    auto y = sample(InnovationDist::normal(), 200, 1);
    auto fc = forecast(model_of(s, p), y, 80.0, 24);
    ASSERT_EQ(fc.horizon, 24u);
    for (std::size_t j = 0; j < 24; ++j) {
        EXPECT_DOUBLE_EQ(fc.return_mean[j], 0.002);
        EXPECT_NEAR(fc.level_point[j], 80.0 * std::exp(0.002 * static_cast<double>(j + 1)), 1e-10);
        EXPECT_DOUBLE_EQ(fc.cond_variance[j], 0.5);
        EXPECT_NEAR(fc.log_level_variance[j], 0.5 * static_cast<double>(j + 1), 1e-12);
    }
}

TEST(Forecast, VarianceApproachesUnconditionalMonotonically) {
    ModelSpec s;
    auto p = table2_garch();
    const double target = 0.370 / (1.0 - 0.812);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto y = simulate(s, p, 500, seed).returns;
        auto fc = forecast(model_of(s, p), y, 70.0, 60);
        const double start_gap = fc.return_variance[0] - target;
        for (std::size_t j = 1; j < fc.horizon; ++j) {
            const double gap = fc.return_variance[j] - target;
            ASSERT_LE(std::abs(gap), std::abs(fc.return_variance[j - 1] - target) + 1e-15);
            ASSERT_GE(gap * start_gap, 0.0);  // approaches from one side
        }
        EXPECT_NEAR(fc.return_variance.back(), target, 1e-4);
    }
}

TEST(Forecast, PsiVarianceMatchesMonteCarlo) {
    const auto spec = seasonal_spec();
    const auto p = seasonal_params();
    auto y = simulate(spec, p, 2000, 3).returns;
    auto fc = forecast(model_of(spec, p), y, 70.0, 24);
    auto paths = continuations(spec, p, y, 24, 10000, 99);
    for (std::size_t j : {0u, 5u, 23u}) {
        double ss = 0.0;
        for (const auto& path : paths) ss += std::pow(path[j] - fc.return_mean[j], 2);
        EXPECT_NEAR(ss / static_cast<double>(paths.size()) / fc.return_variance[j], 1.0, 0.05) << "h=" << j + 1;
    }
}

TEST(Forecast, OneStepCoverage) {
    ModelSpec spec = seasonal_spec();
    spec.innovation = Family::SkewNormal;
    auto p = seasonal_params();
    p.dist_shape = 3.0;
    auto y = simulate(spec, p, 2000, 4).returns;
    auto fc = forecast(model_of(spec, p), y, 70.0, 1);
    auto paths = continuations(spec, p, y, 1, 10000, 7);
    int inside = 0;
    for (const auto& path : paths) {
        const double level = 70.0 * std::exp(path[0]);
        if (level >= fc.level_lower[0] && level <= fc.level_upper[0]) ++inside;
    }
    EXPECT_NEAR(inside / 10000.0, 0.95, 0.03);
}

TEST(Forecast, IntervalsOrderedAndPositive) {
    for (auto family : {Family::Normal, Family::SkewNormal, Family::StudentT}) {
        ModelSpec spec = seasonal_spec();
        spec.innovation = family;
        auto p = seasonal_params();
        if (family == Family::SkewNormal) p.dist_shape = -6.0;
        if (family == Family::StudentT) p.dist_shape = 4.0;
        auto y = simulate(spec, p, 1000, 5).returns;
        for (double coverage : {0.5, 0.8, 0.95, 0.99}) {
            ForecastOptions o;
            o.coverage = coverage;
            auto fc = forecast(model_of(spec, p), y, 70.0, 48, o);
            for (std::size_t j = 0; j < fc.horizon; ++j) {
                ASSERT_GT(fc.level_lower[j], 0.0);
                ASSERT_LT(fc.level_lower[j], fc.level_point[j]);
                ASSERT_LT(fc.level_point[j], fc.level_upper[j]);
                ASSERT_GT(fc.return_variance[j], 0.0);
            }
        }
    }
}

TEST(Forecast, WidthNonDecreasingFromCalmStart) {
    ModelSpec spec;
    spec.ar_lags = {1};
    auto p = table2_garch();
    p.ar = {{1, 0.5}};
    auto y = simulate(spec, p, 1000, 6).returns;
    // zero shocks over the last stretch so sigma^2 starts low
    for (std::size_t t = y.size() - 10; t < y.size(); ++t) y[t] = 0.5 * y[t - 1];
    auto fc = forecast(model_of(spec, p), y, 70.0, 48);
    ASSERT_LT(fc.cond_variance[0], p.unconditional_variance());
    for (std::size_t j = 1; j < fc.horizon; ++j) {
        ASSERT_GE(fc.return_variance[j], fc.return_variance[j - 1]);
        ASSERT_GE(std::log(fc.level_upper[j] / fc.level_lower[j]),
                  std::log(fc.level_upper[j - 1] / fc.level_lower[j - 1]) - 1e-12);
    }
}

TEST(Forecast, OneStepMatchesFilter) {
    const auto spec = seasonal_spec();
    const auto p = seasonal_params();
    auto y = simulate(spec, p, 800, 8).returns;
    auto fc = forecast(model_of(spec, p), y, 70.0, 1);
    // appending the sample mean keeps the presample fill unchanged
    const double next = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    auto extended = y;
    extended.push_back(next);
    auto a = mean_filter(spec, p, extended);
    EXPECT_NEAR(fc.return_mean[0], next - a.back(), 1e-12);
}

TEST(Forecast, DifferencedModelUsesCumulativePsi) {
    ModelSpec spec;
    spec.d = 1;
    ModelParams p;
    p.garch_omega = 1.0;
    auto y = sample(InnovationDist::normal(), 100, 2);
    auto fc = forecast(model_of(spec, p), y, 50.0, 5);
    // returns follow a random walk, so the j-step return error has variance j
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_NEAR(fc.return_variance[j], static_cast<double>(j + 1), 1e-12);
        EXPECT_DOUBLE_EQ(fc.return_mean[j], y.back());
    }
}

TEST(Forecast, LevelCorrection) {
    ModelSpec s;
    auto p = table2_garch();
    auto y = sample(InnovationDist::normal(), 200, 3);
    ForecastOptions on;
    on.level_correction = true;
    auto plain = forecast(model_of(s, p), y, 70.0, 6);
    auto corrected = forecast(model_of(s, p), y, 70.0, 6, on);
    for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_NEAR(corrected.level_point[j], plain.level_point[j] * std::exp(0.5 * plain.log_level_variance[j]),
                    1e-9 * corrected.level_point[j]);
        EXPECT_EQ(corrected.level_lower[j], plain.level_lower[j]);
    }
}

TEST(Forecast, Errors) {
    ModelSpec s;
    ModelParams p;
    auto y = sample(InnovationDist::normal(), 50, 1);
    EXPECT_THROW(forecast(model_of(s, p), y, 70.0, 0), std::invalid_argument);
    ForecastOptions o;
    o.coverage = 1.0;
    EXPECT_THROW(forecast(model_of(s, p), y, 70.0, 3, o), std::invalid_argument);
    o.coverage = 0.0;
    EXPECT_THROW(forecast(model_of(s, p), y, 70.0, 3, o), std::invalid_argument);
    EXPECT_THROW(forecast(model_of(s, p), y, -1.0, 3), std::invalid_argument);
}

TEST(Forecast, HourlyTimestamps) {
    ModelSpec s;
    ModelParams p;
    auto fc = forecast(model_of(s, p), sample(InnovationDist::normal(), 50, 1), 70.0, 3);
    auto last = *parse_timestamp("2018-11-10T23:00");
    with_hourly_timestamps(fc, last);
    ASSERT_EQ(fc.timestamps.size(), 3u);
    EXPECT_EQ(format_timestamp(fc.timestamps[0]), "2018-11-11T00:00");
    EXPECT_EQ(format_timestamp(fc.timestamps[2]), "2018-11-11T02:00");
}
