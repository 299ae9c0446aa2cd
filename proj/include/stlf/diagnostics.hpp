#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "stlf/error.hpp"

namespace stlf {

enum class TestMethod { Adf, LjungBox, McLeodLi };

inline std::string_view to_string(TestMethod m) {
    switch (m) {
        case TestMethod::Adf: return "ADF";
        case TestMethod::LjungBox: return "LJUNG_BOX";
        case TestMethod::McLeodLi: return "MCLEOD_LI";
    }
    return "?";
}

struct TestReport {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t lags_used = 1;
    TestMethod method = TestMethod::Adf;
};

namespace detail {

// Quantiles of the Dickey-Fuller t-distribution, regression with constant and
// no trend. Columns 0.01..0.99 except 0.50 are the classic finite-sample
// table; the 0.001, 0.50 and 0.999 columns were filled in by Monte-Carlo
// simulation of driftless random walks so the whole unit interval is covered.
inline constexpr std::array<double, 11> kDfProbs = {0.001, 0.01, 0.025, 0.05, 0.10, 0.50,
                                                    0.90,  0.95, 0.975, 0.99, 0.999};
inline constexpr std::array<double, 6> kDfSizes = {25, 50, 100, 250, 500, 0 /* infinity */};
inline constexpr std::array<std::array<double, 11>, 6> kDfQuantiles = {{
    {-4.74, -3.75, -3.33, -3.00, -2.63, -1.53, -0.37, 0.00, 0.34, 0.72, 1.58},
    {-4.38, -3.58, -3.22, -2.93, -2.60, -1.55, -0.40, -0.03, 0.29, 0.66, 1.46},
    {-4.23, -3.51, -3.17, -2.89, -2.58, -1.56, -0.42, -0.05, 0.26, 0.63, 1.42},
    {-4.14, -3.46, -3.14, -2.88, -2.57, -1.56, -0.42, -0.06, 0.24, 0.62, 1.40},
    {-4.12, -3.44, -3.13, -2.87, -2.57, -1.57, -0.43, -0.07, 0.24, 0.61, 1.39},
    {-4.10, -3.43, -3.12, -2.86, -2.57, -1.57, -0.44, -0.07, 0.23, 0.60, 1.38},
}};

/// Quantile row for sample size n, linear in 1/n between tabulated sizes.
inline std::array<double, 11> df_quantiles_for(double n) {
    const double inv = 1.0 / n;
    auto inv_size = [](std::size_t r) { return kDfSizes[r] == 0 ? 0.0 : 1.0 / kDfSizes[r]; };
    if (inv >= inv_size(0)) return kDfQuantiles[0];
    std::size_t r = 1;
    while (r < kDfSizes.size() && inv < inv_size(r)) ++r;
    if (r == kDfSizes.size()) return kDfQuantiles.back();
    const double w = (inv - inv_size(r)) / (inv_size(r - 1) - inv_size(r));
    std::array<double, 11> out{};
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = w * kDfQuantiles[r - 1][c] + (1.0 - w) * kDfQuantiles[r][c];
    return out;
}

}  // namespace detail

/// Left-tail p-value of a Dickey-Fuller t statistic (constant, no trend),
/// interpolated in the critical-value table and clamped to [0.001, 0.999].
inline double dickey_fuller_pvalue(double statistic, std::size_t sample_size) {
    const auto q = detail::df_quantiles_for(static_cast<double>(sample_size));
    const auto& p = detail::kDfProbs;
    if (statistic <= q.front()) return p.front();
    if (statistic >= q.back()) return p.back();
    std::size_t i = 1;
    while (statistic > q[i]) ++i;
    const double w = (statistic - q[i - 1]) / (q[i] - q[i - 1]);
    return p[i - 1] + w * (p[i] - p[i - 1]);
}

/// Schwert's rule floor(12 (n/100)^(1/4)).
inline std::size_t schwert_lags(std::size_t n) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

/// Augmented Dickey-Fuller test with constant and no trend:
///   dy_t = c + rho*y_{t-1} + sum_{i=1..p} delta_i*dy_{t-i} + e_t.
/// The statistic is the t-ratio on rho.
inline TestReport adf_test(std::span<const double> y, std::optional<std::size_t> lags = std::nullopt) {
    const std::size_t n = y.size();
    const std::size_t p = lags.value_or(schwert_lags(n));
    if (p < 1) throw std::invalid_argument("adf_test: at least one augmentation lag is required");
    if (n < p + 10) throw DataError("adf_test: series of length " + std::to_string(n) + " too short for " + std::to_string(p) + " lags");
    const std::size_t rows = n - 1 - p;
    const std::size_t k = p + 2;
    if (rows <= k) throw DataError("adf_test: not enough observations for the regression");

    Eigen::MatrixXd X(rows, k);
    Eigen::VectorXd dep(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + p + 1;
        dep(r) = y[t] - y[t - 1];
        X(r, 0) = 1.0;
        X(r, 1) = y[t - 1];
        for (std::size_t i = 1; i <= p; ++i) X(r, 1 + i) = y[t - i] - y[t - i - 1];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(k))
        throw ModelError("adf_test: singular regression (constant or degenerate series)");
    Eigen::VectorXd beta = qr.solve(dep);
    const double rss = (dep - X * beta).squaredNorm();
    const double s2 = rss / static_cast<double>(rows - k);
    const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    const double se = std::sqrt(s2 * xtx_inv(1, 1));
    if (!(se > 0.0) || !std::isfinite(se))
        throw ModelError("adf_test: degenerate regression (zero residual variance)");

    TestReport rep;
    rep.method = TestMethod::Adf;
    rep.statistic = beta(1) / se;
    rep.p_value = dickey_fuller_pvalue(rep.statistic, rows);
    rep.lags_used = p;
    return rep;
}

/// Sample autocorrelations rho_1..rho_m of the demeaned series.
inline std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0)) throw DataError("autocorrelations: series has zero variance");
    std::vector<double> acf(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = k; t < n; ++t) s += (x[t] - mean) * (x[t - k] - mean);
        acf[k - 1] = s / denom;
    }
    return acf;
}

/// Q = n(n+2) * sum_k rho_k^2/(n-k) from precomputed autocorrelations, with
/// a chi-square(m) p-value where m = acf.size().
inline TestReport ljung_box_from_acf(std::span<const double> acf, std::size_t n) {
    const std::size_t m = acf.size();
    if (m < 1 || m >= n) throw std::invalid_argument("ljung_box: need 1 <= lags < length");
    const double nn = static_cast<double>(n);
    double q = 0.0;
    for (std::size_t k = 1; k <= m; ++k) q += acf[k - 1] * acf[k - 1] / (nn - static_cast<double>(k));
    q *= nn * (nn + 2.0);
    boost::math::chi_squared_distribution<double> chi(static_cast<double>(m));
    TestReport rep;
    rep.method = TestMethod::LjungBox;
    rep.statistic = q;
    rep.p_value = std::clamp(boost::math::cdf(boost::math::complement(chi, q)), 0.0, 1.0);
    rep.lags_used = m;
    return rep;
}

inline TestReport ljung_box(std::span<const double> x, std::size_t lags) {
    if (lags < 1 || lags >= x.size())
        throw std::invalid_argument("ljung_box: lags (" + std::to_string(lags) +
                                    ") must satisfy 1 <= lags < length (" +
                                    std::to_string(x.size()) + ")");
    return ljung_box_from_acf(autocorrelations(x, lags), x.size());
}

/// Ljung-Box on the squared demeaned series.
inline TestReport mcleod_li(std::span<const double> x, std::size_t lags = 20) {
    if (lags < 1 || lags >= x.size())
        throw std::invalid_argument("mcleod_li: lags must satisfy 1 <= lags < length");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
    auto rep = ljung_box(sq, lags);
    rep.method = TestMethod::McLeodLi;
    return rep;
}

}  // namespace stlf
