#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "stlf/error.hpp"
#include "stlf/estimation.hpp"
#include "stlf/innovations.hpp"
#include "stlf/sarima_garch.hpp"
#include "stlf/timestamp.hpp"

namespace stlf {

struct ForecastOptions {
    double coverage = 0.95;
    /// Multiply level points by exp(var/2) (lognormal mean) instead of
    /// reporting the median-style exp(mean) chain.
    bool level_correction = false;
};

struct ForecastResult {
    std::size_t horizon = 0;
    std::vector<double> return_mean;
    std::vector<double> return_variance;  // variance of the j-step return forecast error
    std::vector<double> log_level_variance;  // variance of the cumulative log-level error
    std::vector<double> cond_variance;  // GARCH E[sigma^2_{T+j}]
    std::vector<double> level_point;
    std::vector<double> level_lower;
    std::vector<double> level_upper;
    double origin_level = 0.0;
    double coverage = 0.95;
    std::vector<Timestamp> timestamps;  // filled by with_hourly_timestamps
};

namespace detail {

inline std::vector<double> expand_psi(const MeanOperator& op, std::size_t n) {
    std::vector<double> psi(n, 0.0);
    if (n == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
        double v = 0.0;
        for (auto [k, c] : op.ma)
            if (static_cast<std::size_t>(k) == j) v += c;
        for (auto [k, c] : op.ar)
            if (static_cast<std::size_t>(k) <= j) v += c * psi[j - static_cast<std::size_t>(k)];
        psi[j] = v;
    }
    return psi;
}

}  // namespace detail

/// First n coefficients of theta(L) Theta(L^s) / [phi(L) Phi(L^s) (1-L)^d],
/// psi_0 = 1. Rejects a non-stationary phi(L) Phi(L^s).
inline std::vector<double> psi_weights(const ModelSpec& spec, const ModelParams& params, std::size_t n) {
    validate(spec, params);
    if (!is_stationary(params)) throw ConstraintViolation("psi_weights: AR polynomial is not stationary");
    return detail::expand_psi(combined_operator(spec, params), n);
}

/// h-step forecast from the end of `returns`.
///
/// Mean: the combined recursion with future shocks at 0 and in-sample
/// shocks from the filter. Variance: sigma^2_{T+1} from the realized a_T and
/// sigma_T^2, then sigma^2_{T+j} = omega + (alpha+beta) sigma^2_{T+j-1};
/// forecast-error variances accumulate psi-weights over those. Levels chain
/// exp(return_mean) from origin_level; bands use innovation quantiles on the
/// cumulative log-level error and are exponentiated.
inline ForecastResult forecast(const FittedModel& model, std::span<const double> returns, double origin_level,
                               std::size_t h, const ForecastOptions& opts = {}) {
    if (h < 1) throw std::invalid_argument("forecast: horizon must be at least 1");
    if (!(opts.coverage > 0.0 && opts.coverage < 1.0))
        throw std::invalid_argument("forecast: coverage must lie in (0,1)");
    if (!(origin_level > 0.0) || !std::isfinite(origin_level))
        throw std::invalid_argument("forecast: origin level must be positive");
    const auto& spec = model.spec;
    const auto& params = model.params;
    const auto f = filter(spec, params, returns);
    const auto op = combined_operator(spec, params);
    const std::size_t lag = static_cast<std::size_t>(op.max_lag());
    const std::size_t n = returns.size();

    ForecastResult out;
    out.horizon = h;
    out.origin_level = origin_level;
    out.coverage = opts.coverage;

    // mean recursion over [presample | sample | future]
    const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(n);
    std::vector<double> y(lag + n + h, mean), a(lag + n + h, 0.0);
    std::copy(returns.begin(), returns.end(), y.begin() + static_cast<std::ptrdiff_t>(lag));
    std::copy(f.residuals.begin(), f.residuals.end(), a.begin() + static_cast<std::ptrdiff_t>(lag));
    out.return_mean.resize(h);
    for (std::size_t j = 0; j < h; ++j) {
        const std::size_t t = lag + n + j;
        double v = params.constant;
        for (auto [k, c] : op.ar) v += c * y[t - static_cast<std::size_t>(k)];
        for (auto [k, c] : op.ma) v += c * a[t - static_cast<std::size_t>(k)];
        y[t] = v;
        out.return_mean[j] = v;
    }

    // conditional variance path
    const double persistence = params.garch_alpha + params.garch_beta;
    out.cond_variance.resize(h);
    const double a_last = f.residuals.back();
    out.cond_variance[0] =
        params.garch_omega + params.garch_alpha * a_last * a_last + params.garch_beta * f.cond_variance.back();
    for (std::size_t j = 1; j < h; ++j)
        out.cond_variance[j] = params.garch_omega + persistence * out.cond_variance[j - 1];

    // with d = 1 the unit root is part of the operator
    const auto psi = detail::expand_psi(op, h);
    std::vector<double> cum_psi(h);
    std::partial_sum(psi.begin(), psi.end(), cum_psi.begin());

    out.return_variance.resize(h);
    out.log_level_variance.resize(h);
    for (std::size_t j = 0; j < h; ++j) {
        double rv = 0.0, lv = 0.0;
        for (std::size_t i = 0; i <= j; ++i) {
            rv += psi[i] * psi[i] * out.cond_variance[j - i];
            lv += cum_psi[i] * cum_psi[i] * out.cond_variance[j - i];
        }
        out.return_variance[j] = rv;
        out.log_level_variance[j] = lv;
    }

    const auto dist = innovation_dist(spec, params);
    const double q_lo = quantile(dist, 0.5 * (1.0 - opts.coverage));
    const double q_hi = quantile(dist, 0.5 * (1.0 + opts.coverage));
    out.level_point.resize(h);
    out.level_lower.resize(h);
    out.level_upper.resize(h);
    double log_level = std::log(origin_level);
    for (std::size_t j = 0; j < h; ++j) {
        log_level += out.return_mean[j];
        const double sd = std::sqrt(out.log_level_variance[j]);
        const double correction = opts.level_correction ? 0.5 * out.log_level_variance[j] : 0.0;
        out.level_point[j] = std::exp(log_level + correction);
        out.level_lower[j] = std::exp(log_level + q_lo * sd);
        out.level_upper[j] = std::exp(log_level + q_hi * sd);
    }
    return out;
}

/// Hourly timestamps following `last`.
inline void with_hourly_timestamps(ForecastResult& fc, Timestamp last) {
    fc.timestamps.resize(fc.horizon);
    for (std::size_t j = 0; j < fc.horizon; ++j) fc.timestamps[j] = last + std::chrono::hours{static_cast<long>(j + 1)};
}

}  // namespace stlf
