#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/skew_normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "stlf/error.hpp"

namespace stlf {

enum class Family { Normal, SkewNormal, StudentT };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::SkewNormal: return "skew_normal";
        case Family::StudentT: return "student_t";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    if (s == "normal") return Family::Normal;
    if (s == "skew_normal") return Family::SkewNormal;
    if (s == "student_t") return Family::StudentT;
    throw std::invalid_argument("unknown innovation family '" + std::string(s) + "'");
}

/// Innovation distribution standardized to mean 0 and variance 1.
///
/// `shape` is the skew-normal slant, `dof` the Student-t degrees of freedom;
/// each is ignored by the other families. Location and scale are never free:
/// they are derived so that the first two moments are fixed.
struct InnovationDist {
    Family family = Family::Normal;
    double shape = 0.0;
    double dof = 8.0;

    static InnovationDist normal() { return {Family::Normal, 0.0, 8.0}; }
    static InnovationDist skew_normal(double alpha) { return {Family::SkewNormal, alpha, 8.0}; }
    static InnovationDist student_t(double nu) { return {Family::StudentT, 0.0, nu}; }

    /// The family's free parameter, if it has one.
    bool has_shape() const noexcept { return family != Family::Normal; }
    double free_parameter() const noexcept { return family == Family::StudentT ? dof : shape; }
    InnovationDist with_free_parameter(double v) const {
        InnovationDist d = *this;
        if (family == Family::StudentT) d.dof = v;
        else if (family == Family::SkewNormal) d.shape = v;
        return d;
    }

    void validate() const {
        if (family == Family::SkewNormal && !std::isfinite(shape))
            throw std::invalid_argument("skew-normal shape must be finite");
        if (family == Family::StudentT && !(dof > 2.0))
            throw std::invalid_argument("student-t dof must exceed 2 for a finite variance");
    }
};

namespace detail {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln(sqrt(2*pi))

/// ln Phi(u), accurate deep in the lower tail where Phi underflows.
inline double log_norm_cdf(double u) {
    if (u > -30.0) return std::log(0.5 * std::erfc(-u / std::numbers::sqrt2));
    const double u2 = u * u;
    // Mills-ratio asymptotic series
    return -0.5 * u2 - std::log(-u) - kLogSqrt2Pi + std::log1p(-1.0 / u2 + 3.0 / (u2 * u2));
}

/// Location/scale that standardize the skew-normal with slant alpha.
struct SkewNormalParams {
    double location;
    double scale;
};

inline SkewNormalParams skew_normal_standardization(double alpha) {
    const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
    const double scale = 1.0 / std::sqrt(1.0 - 2.0 * delta * delta / std::numbers::pi);
    const double location = -scale * delta * std::sqrt(2.0 / std::numbers::pi);
    return {location, scale};
}

inline double student_t_scale(double nu) { return std::sqrt((nu - 2.0) / nu); }

}  // namespace detail

inline double log_density(const InnovationDist& dist, double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("log_density: non-finite argument");
    dist.validate();
    switch (dist.family) {
        case Family::Normal:
            return -detail::kLogSqrt2Pi - 0.5 * x * x;
        case Family::SkewNormal: {
            auto [loc, scale] = detail::skew_normal_standardization(dist.shape);
            const double z = (x - loc) / scale;
            return std::numbers::ln2 - std::log(scale) - detail::kLogSqrt2Pi - 0.5 * z * z +
                   detail::log_norm_cdf(dist.shape * z);
        }
        case Family::StudentT: {
            const double nu = dist.dof;
            return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                   0.5 * std::log((nu - 2.0) * std::numbers::pi) -
                   0.5 * (nu + 1.0) * std::log1p(x * x / (nu - 2.0));
        }
    }
    return 0.0;
}

inline double density(const InnovationDist& dist, double x) { return std::exp(log_density(dist, x)); }

inline double cdf(const InnovationDist& dist, double x) {
    dist.validate();
    switch (dist.family) {
        case Family::Normal:
            return 0.5 * std::erfc(-x / std::numbers::sqrt2);
        case Family::SkewNormal: {
            auto [loc, scale] = detail::skew_normal_standardization(dist.shape);
            boost::math::skew_normal_distribution<double> sn(loc, scale, dist.shape);
            return boost::math::cdf(sn, x);
        }
        case Family::StudentT: {
            boost::math::students_t_distribution<double> t(dist.dof);
            return boost::math::cdf(t, x / detail::student_t_scale(dist.dof));
        }
    }
    return 0.0;
}

/// Inverse CDF. The skew-normal has no closed form, so it is found by
/// bisection to 1e-10 in x.
inline double quantile(const InnovationDist& dist, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must lie in (0,1)");
    dist.validate();
    switch (dist.family) {
        case Family::Normal:
            return boost::math::quantile(boost::math::normal_distribution<double>(), p);
        case Family::StudentT: {
            boost::math::students_t_distribution<double> t(dist.dof);
            return boost::math::quantile(t, p) * detail::student_t_scale(dist.dof);
        }
        case Family::SkewNormal: {
            double lo = -1.0, hi = 1.0;
            while (cdf(dist, lo) > p) lo *= 2.0;
            while (cdf(dist, hi) < p) hi *= 2.0;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                (cdf(dist, mid) < p ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

/// Draws n standardized innovations; the generator is seeded from `seed`
/// and owned by the call.
inline std::vector<double> sample(const InnovationDist& dist, std::size_t n, std::uint64_t seed) {
    dist.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> out(n);
    switch (dist.family) {
        case Family::Normal:
            for (auto& x : out) x = z(rng);
            break;
        case Family::SkewNormal: {
            const double delta = dist.shape / std::sqrt(1.0 + dist.shape * dist.shape);
            const double tail = std::sqrt(1.0 - delta * delta);
            auto [loc, scale] = detail::skew_normal_standardization(dist.shape);
            for (auto& x : out) {
                const double z1 = z(rng);
                const double z2 = z(rng);
                x = loc + scale * (delta * std::abs(z1) + tail * z2);
            }
            break;
        }
        case Family::StudentT: {
            std::chi_squared_distribution<double> chi(dist.dof);
            const double scale = detail::student_t_scale(dist.dof);
            for (auto& x : out) {
                const double num = z(rng);
                x = scale * num / std::sqrt(chi(rng) / dist.dof);
            }
            break;
        }
    }
    return out;
}

}  // namespace stlf
