#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stlf/error.hpp"
#include "stlf/innovations.hpp"
#include "stlf/lag_polynomial.hpp"

namespace stlf {

/// Lag structure of a multiplicative seasonal ARMA mean with GARCH(1,1)
/// variance:
///   phi(L) Phi(L^s) (1-L)^d y_t = c + theta(L) Theta(L^s) a_t,
///   a_t = eps_t sigma_t,  sigma_t^2 = omega + alpha a_{t-1}^2 + beta sigma_{t-1}^2.
struct ModelSpec {
    std::set<int> ar_lags;
    std::set<int> ma_lags;
    std::set<int> sar_lags;  // multiples of season
    std::set<int> sma_lags;  // multiples of season
    int season = 24;
    int d = 0;
    int garch_p = 1;
    int garch_q = 1;
    Family innovation = Family::Normal;

    void validate() const {
        if (season < 1) throw std::invalid_argument("season must be positive");
        if (d != 0 && d != 1) throw std::invalid_argument("d must be 0 or 1");
        if (garch_p != 1 || garch_q != 1)
            throw std::invalid_argument("only GARCH(1,1) is supported");
        for (const auto* lags : {&ar_lags, &ma_lags, &sar_lags, &sma_lags})
            for (int l : *lags)
                if (l < 1) throw std::invalid_argument("lags must be positive");
        for (const auto* lags : {&sar_lags, &sma_lags})
            for (int l : *lags)
                if (l % season != 0)
                    throw std::invalid_argument("seasonal lag " + std::to_string(l) +
                                                " is not a multiple of season " + std::to_string(season));
    }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct ModelParams {
    double constant = 0.0;
    LagMap ar;
    LagMap ma;
    LagMap sar;
    LagMap sma;
    double garch_omega = 1.0;
    double garch_alpha = 0.0;
    double garch_beta = 0.0;
    std::optional<double> dist_shape;  // skew-normal slant or Student-t dof

    double unconditional_variance() const { return garch_omega / (1.0 - garch_alpha - garch_beta); }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline void check_garch_constraints(const ModelParams& p) {
    if (!(p.garch_omega > 0.0) || !std::isfinite(p.garch_omega))
        throw ConstraintViolation("GARCH omega must be positive");
    if (!(p.garch_alpha >= 0.0) || !(p.garch_beta >= 0.0))
        throw ConstraintViolation("GARCH alpha and beta must be non-negative");
    if (!(p.garch_alpha + p.garch_beta < 1.0))
        throw ConstraintViolation("GARCH alpha + beta must be below 1");
}

/// Structural agreement between params and spec plus GARCH constraints.
/// Mean-equation stationarity is checked separately (see is_stationary).
inline void validate(const ModelSpec& spec, const ModelParams& p) {
    spec.validate();
    auto same_keys = [](const std::set<int>& lags, const LagMap& m, const char* what) {
        if (m.size() != lags.size() ||
            !std::all_of(m.begin(), m.end(), [&](const auto& kv) { return lags.count(kv.first) == 1; }))
            throw std::invalid_argument(std::string(what) + " coefficients do not match the spec's lags");
        for (const auto& kv : m)
            if (!std::isfinite(kv.second)) throw ConstraintViolation(std::string(what) + " coefficient not finite");
    };
    same_keys(spec.ar_lags, p.ar, "AR");
    same_keys(spec.ma_lags, p.ma, "MA");
    same_keys(spec.sar_lags, p.sar, "SAR");
    same_keys(spec.sma_lags, p.sma, "SMA");
    if (!std::isfinite(p.constant)) throw ConstraintViolation("constant not finite");
    check_garch_constraints(p);
    if (p.dist_shape) {
        if (spec.innovation == Family::StudentT && !(*p.dist_shape > 2.0))
            throw ConstraintViolation("student-t dof must exceed 2");
        if (!std::isfinite(*p.dist_shape)) throw ConstraintViolation("distribution shape not finite");
    }
}

/// Default free parameter when a fit or config leaves it unset.
inline double default_shape(Family f) { return f == Family::StudentT ? 8.0 : 0.0; }

inline InnovationDist innovation_dist(const ModelSpec& spec, const ModelParams& p) {
    InnovationDist dist{spec.innovation, 0.0, 8.0};
    return dist.with_free_parameter(p.dist_shape.value_or(default_shape(spec.innovation)));
}

/// phi(L) Phi(L^s), without the differencing factor.
inline LagPolynomial stationary_ar_polynomial(const ModelParams& p) {
    return multiply(ar_factor(p.ar), ar_factor(p.sar));
}

/// Combined mean operator: AR side phi(L) Phi(L^s) (1-L)^d, MA side
/// theta(L) Theta(L^s), each expanded into a single sparse term list so that
/// cross terms (e.g. lag 2 + 24 = 26) appear explicitly.
struct MeanOperator {
    LagTerms ar;
    LagTerms ma;

    int max_lag() const { return std::max(stlf::max_lag(ar), stlf::max_lag(ma)); }
};

inline MeanOperator combined_operator(const ModelSpec& spec, const ModelParams& p) {
    return {ar_terms(multiply(stationary_ar_polynomial(p), difference_factor(spec.d))),
            ma_terms(multiply(ma_factor(p.ma), ma_factor(p.sma)))};
}

/// Largest lag any combined term can reach for this spec, independent of
/// coefficient values. Used for burn-in lengths.
inline int max_combined_lag(const ModelSpec& spec) {
    auto top = [](const std::set<int>& s) { return s.empty() ? 0 : *s.rbegin(); };
    return std::max(top(spec.ar_lags) + top(spec.sar_lags) + spec.d, top(spec.ma_lags) + top(spec.sma_lags));
}

/// Nonseasonal and seasonal AR polynomials both have all roots outside the unit circle.
inline bool is_stationary(const ModelParams& p) {
    return roots_outside_unit_circle(ar_factor(p.ar)) && roots_outside_unit_circle(ar_factor(p.sar));
}

inline bool is_invertible(const ModelParams& p) {
    return roots_outside_unit_circle(ma_factor(p.ma)) && roots_outside_unit_circle(ma_factor(p.sma));
}

/// Values preceding the first observation. y and a hold the last
/// max_combined_lag values (oldest first); last_shock/last_variance seed the
/// GARCH recursion. When absent, filters fall back to y = sample mean, a = 0
/// and sigma_0^2 = unconditional variance.
struct PresampleState {
    std::vector<double> y;
    std::vector<double> a;
    std::optional<double> last_shock;
    std::optional<double> last_variance;
};

struct FilterOutput {
    std::vector<double> residuals;      // a_t
    std::vector<double> cond_variance;  // sigma_t^2
    std::vector<double> std_residuals;  // a_t / sigma_t
};

namespace detail {

inline std::vector<double> run_mean_filter(const MeanOperator& op, double constant, std::span<const double> y,
                                           const PresampleState* presample) {
    const std::size_t lag = static_cast<std::size_t>(op.max_lag());
    const std::size_t n = y.size();
    std::vector<double> ybuf(lag + n), abuf(lag + n, 0.0);
    if (presample && presample->y.size() >= lag && presample->a.size() >= lag) {
        std::copy(presample->y.end() - static_cast<std::ptrdiff_t>(lag), presample->y.end(), ybuf.begin());
        std::copy(presample->a.end() - static_cast<std::ptrdiff_t>(lag), presample->a.end(), abuf.begin());
    } else {
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        std::fill(ybuf.begin(), ybuf.begin() + static_cast<std::ptrdiff_t>(lag), mean);
    }
    std::copy(y.begin(), y.end(), ybuf.begin() + static_cast<std::ptrdiff_t>(lag));

    for (std::size_t t = lag; t < lag + n; ++t) {
        double v = ybuf[t] - constant;
        for (auto [k, c] : op.ar) v -= c * ybuf[t - static_cast<std::size_t>(k)];
        for (auto [k, c] : op.ma) v -= c * abuf[t - static_cast<std::size_t>(k)];
        abuf[t] = v;
    }
    return {abuf.begin() + static_cast<std::ptrdiff_t>(lag), abuf.end()};
}

}  // namespace detail

/// Mean-equation residuals a_t = y_t - c - sum AR_k y_{t-k} - sum MA_k a_{t-k}
/// using the combined (expanded) operator. Differencing (d = 1) is folded
/// into the AR side so the output has the same length as the input.
inline std::vector<double> mean_filter(const ModelSpec& spec, const ModelParams& params,
                                       std::span<const double> returns,
                                       const PresampleState* presample = nullptr) {
    validate(spec, params);
    const auto op = combined_operator(spec, params);
    if (returns.size() < static_cast<std::size_t>(max_combined_lag(spec)) + 1)
        throw DataError("mean_filter: series of length " + std::to_string(returns.size()) +
                        " shorter than max lag + 1");
    return detail::run_mean_filter(op, params.constant, returns, presample);
}

/// sigma_0^2 = omega/(1-alpha-beta) (or the presample recursion step when
/// given), then sigma_t^2 = omega + alpha a_{t-1}^2 + beta sigma_{t-1}^2.
inline std::vector<double> variance_filter(const ModelParams& params, std::span<const double> residuals,
                                           const PresampleState* presample = nullptr) {
    check_garch_constraints(params);
    const double omega = params.garch_omega, alpha = params.garch_alpha, beta = params.garch_beta;
    std::vector<double> s2(residuals.size());
    if (s2.empty()) return s2;
    if (presample && presample->last_shock && presample->last_variance)
        s2[0] = omega + alpha * *presample->last_shock * *presample->last_shock + beta * *presample->last_variance;
    else
        s2[0] = params.unconditional_variance();
    for (std::size_t t = 1; t < s2.size(); ++t)
        s2[t] = omega + alpha * residuals[t - 1] * residuals[t - 1] + beta * s2[t - 1];
    return s2;
}

inline FilterOutput filter(const ModelSpec& spec, const ModelParams& params, std::span<const double> returns,
                           const PresampleState* presample = nullptr) {
    FilterOutput out;
    out.residuals = mean_filter(spec, params, returns, presample);
    out.cond_variance = variance_filter(params, out.residuals, presample);
    out.std_residuals.resize(out.residuals.size());
    for (std::size_t t = 0; t < out.residuals.size(); ++t)
        out.std_residuals[t] = out.residuals[t] / std::sqrt(out.cond_variance[t]);
    return out;
}

/// Conditional log-likelihood
///   sum_{t >= burn} [ log f(a_t/sigma_t) - 0.5 ln sigma_t^2 ],
/// with burn = max combined lag. Throws ConstraintViolation for inadmissible
/// parameters and NonFiniteLikelihood when the sum is not finite.
inline double log_likelihood(const ModelSpec& spec, const ModelParams& params, std::span<const double> returns) {
    const auto f = filter(spec, params, returns);
    const auto dist = innovation_dist(spec, params);
    const std::size_t burn = static_cast<std::size_t>(max_combined_lag(spec));
    double ll = 0.0;
    for (std::size_t t = burn; t < returns.size(); ++t)
        ll += log_density(dist, f.std_residuals[t]) - 0.5 * std::log(f.cond_variance[t]);
    if (!std::isfinite(ll)) throw NonFiniteLikelihood("log-likelihood is not finite");
    return ll;
}

/// Output of simulate: the kept returns plus everything needed to replay
/// them through the filters exactly.
struct SimulatedPath {
    std::vector<double> returns;
    std::vector<double> shocks;     // a_t
    std::vector<double> variances;  // sigma_t^2
    std::vector<double> innovations;
    PresampleState presample;
};

/// Generates n returns: draws eps_t, builds sigma_t and a_t, then inverts
/// the mean recursion. The first 10 * max_combined_lag points are discarded.
inline SimulatedPath simulate(const ModelSpec& spec, const ModelParams& params, std::size_t n, std::uint64_t seed) {
    validate(spec, params);
    if (!is_stationary(params)) throw ConstraintViolation("simulate: AR polynomial is not stationary");
    const std::size_t lag = static_cast<std::size_t>(max_combined_lag(spec));
    const std::size_t burn = 10 * lag;
    if (n <= burn)
        throw std::invalid_argument("simulate: n must exceed the burn-in of " + std::to_string(burn));
    const auto op = combined_operator(spec, params);
    const std::size_t total = burn + n;
    const auto eps = sample(innovation_dist(spec, params), total, seed);

    double presample_level = 0.0;
    if (spec.d == 0) {
        double ar_sum = 0.0;
        for (auto [k, c] : op.ar) ar_sum += c;
        presample_level = params.constant / (1.0 - ar_sum);
    }
    std::vector<double> ybuf(lag + total, presample_level), abuf(lag + total, 0.0), s2(total);
    const double omega = params.garch_omega, alpha = params.garch_alpha, beta = params.garch_beta;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t t = lag + i;
        s2[i] = i == 0 ? params.unconditional_variance() : omega + alpha * abuf[t - 1] * abuf[t - 1] + beta * s2[i - 1];
        abuf[t] = eps[i] * std::sqrt(s2[i]);
        double v = params.constant + abuf[t];
        for (auto [k, c] : op.ar) v += c * ybuf[t - static_cast<std::size_t>(k)];
        for (auto [k, c] : op.ma) v += c * abuf[t - static_cast<std::size_t>(k)];
        ybuf[t] = v;
    }

    SimulatedPath path;
    const auto keep = static_cast<std::ptrdiff_t>(lag + burn);
    path.returns.assign(ybuf.begin() + keep, ybuf.end());
    path.shocks.assign(abuf.begin() + keep, abuf.end());
    path.variances.assign(s2.begin() + static_cast<std::ptrdiff_t>(burn), s2.end());
    path.innovations.assign(eps.begin() + static_cast<std::ptrdiff_t>(burn), eps.end());
    path.presample.y.assign(ybuf.begin() + static_cast<std::ptrdiff_t>(burn), ybuf.begin() + keep);
    path.presample.a.assign(abuf.begin() + static_cast<std::ptrdiff_t>(burn), abuf.begin() + keep);
    if (burn > 0) {
        path.presample.last_shock = abuf[static_cast<std::size_t>(keep) - 1];
        path.presample.last_variance = s2[burn - 1];
    }
    return path;
}

}  // namespace stlf
