#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace stlf {

/// Sparse lag -> coefficient map, e.g. {2: 0.228} for an AR term at lag 2.
using LagMap = std::map<int, double>;

/// Nonzero terms of a combined lag operator, sorted by lag.
using LagTerms = std::vector<std::pair<int, double>>;

/// Dense polynomial in the lag operator, coefficient k multiplies L^k.
using LagPolynomial = std::vector<double>;

/// 1 - sum_k phi_k L^k
inline LagPolynomial ar_factor(const LagMap& coeffs) {
    int deg = coeffs.empty() ? 0 : coeffs.rbegin()->first;
    LagPolynomial p(static_cast<std::size_t>(deg) + 1, 0.0);
    p[0] = 1.0;
    for (auto [lag, c] : coeffs) p[static_cast<std::size_t>(lag)] -= c;
    return p;
}

/// 1 + sum_k theta_k L^k
inline LagPolynomial ma_factor(const LagMap& coeffs) {
    int deg = coeffs.empty() ? 0 : coeffs.rbegin()->first;
    LagPolynomial p(static_cast<std::size_t>(deg) + 1, 0.0);
    p[0] = 1.0;
    for (auto [lag, c] : coeffs) p[static_cast<std::size_t>(lag)] += c;
    return p;
}

/// (1 - L)^d
inline LagPolynomial difference_factor(int d) {
    LagPolynomial p{1.0};
    for (int i = 0; i < d; ++i) {
        LagPolynomial next(p.size() + 1, 0.0);
        for (std::size_t k = 0; k < p.size(); ++k) {
            next[k] += p[k];
            next[k + 1] -= p[k];
        }
        p = std::move(next);
    }
    return p;
}

inline LagPolynomial multiply(const LagPolynomial& a, const LagPolynomial& b) {
    LagPolynomial out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

/// Terms c_k such that poly = 1 - sum c_k L^k (the AR sign convention).
inline LagTerms ar_terms(const LagPolynomial& poly) {
    LagTerms t;
    for (std::size_t k = 1; k < poly.size(); ++k)
        if (poly[k] != 0.0) t.emplace_back(static_cast<int>(k), -poly[k]);
    return t;
}

/// Terms c_k such that poly = 1 + sum c_k L^k (the MA sign convention).
inline LagTerms ma_terms(const LagPolynomial& poly) {
    LagTerms t;
    for (std::size_t k = 1; k < poly.size(); ++k)
        if (poly[k] != 0.0) t.emplace_back(static_cast<int>(k), poly[k]);
    return t;
}

inline int max_lag(const LagTerms& terms) { return terms.empty() ? 0 : terms.back().first; }

/// Roots of p(z) = sum_k poly[k] z^k, via the companion matrix.
/// Trailing zero coefficients are dropped; poly[0] must be nonzero.
inline std::vector<std::complex<double>> polynomial_roots(LagPolynomial poly) {
    while (poly.size() > 1 && poly.back() == 0.0) poly.pop_back();
    const std::size_t deg = poly.size() - 1;
    if (deg == 0) return {};
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                                      static_cast<Eigen::Index>(deg));
    for (std::size_t i = 0; i < deg; ++i)
        companion(0, static_cast<Eigen::Index>(i)) = -poly[deg - 1 - i] / poly[deg];
    for (std::size_t i = 1; i < deg; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    std::vector<std::complex<double>> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return roots;
}

/// True when every root of the polynomial lies strictly outside the unit circle.
inline bool roots_outside_unit_circle(const LagPolynomial& poly) {
    for (auto r : polynomial_roots(poly))
        if (std::abs(r) <= 1.0) return false;
    return true;
}

}  // namespace stlf
