#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stlf/error.hpp"
#include "stlf/nelder_mead.hpp"
#include "stlf/sarima_garch.hpp"

namespace stlf {

enum class Criterion { Aic, Bic };

struct FitOptions {
    std::uint64_t seed = 0;
    /// Estimate the skew-normal slant / Student-t dof jointly; when false the
    /// value in `start` (or the family default) is held fixed.
    bool estimate_shape = true;
    std::size_t max_iterations = 20000;
    /// Extra runs from jittered starts; the best log-likelihood wins.
    int restarts = 2;
    double tolerance = 1e-8;
    /// Overrides the default start point.
    std::optional<ModelParams> start;
};

struct FittedModel {
    ModelSpec spec;
    ModelParams params;
    /// Keyed by parameter name (see ParameterLayout::names). Empty when the Hessian
    /// of the negative log-likelihood is not positive definite.
    std::map<std::string, double> std_errors;
    std::map<std::string, double> t_stats;
    std::map<std::string, double> p_values;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::size_t n_obs = 0;
    std::size_t num_params = 0;
    FilterOutput filter;
    bool converged = false;
    std::size_t iterations = 0;
    bool ar_stationary = true;
    bool ma_invertible = true;
    std::vector<std::string> warnings;

    double criterion(Criterion c) const { return c == Criterion::Aic ? aic : bic; }
};

inline double aic(double loglik, std::size_t k) { return 2.0 * static_cast<double>(k) - 2.0 * loglik; }
inline double bic(double loglik, std::size_t k, std::size_t n) {
    return static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * loglik;
}

/// Maps between ModelParams and flat vectors. The natural vector is
///   [c, ar..., ma..., sar..., sma..., omega, alpha, beta, (shape)]
/// and the unconstrained vector replaces the GARCH block with
///   [ln omega, logit(budget), logit(share)],
/// where alpha + beta = 0.9999 * sigmoid(budget), alpha = (alpha+beta) * sigmoid(share).
/// Student-t dof enters as ln(nu - 2).
class ParameterLayout {
public:
    static constexpr double kStationarityBudget = 0.9999;

    ParameterLayout(const ModelSpec& spec, bool estimate_shape)
        : spec_(spec), has_shape_(estimate_shape && spec.innovation != Family::Normal) {}

    std::size_t size() const {
        return 1 + spec_.ar_lags.size() + spec_.ma_lags.size() + spec_.sar_lags.size() + spec_.sma_lags.size() +
               3 + (has_shape_ ? 1 : 0);
    }
    bool has_shape() const { return has_shape_; }

    std::vector<std::string> names() const {
        std::vector<std::string> n{"constant"};
        for (int l : spec_.ar_lags) n.push_back("ar." + std::to_string(l));
        for (int l : spec_.ma_lags) n.push_back("ma." + std::to_string(l));
        for (int l : spec_.sar_lags) n.push_back("sar." + std::to_string(l));
        for (int l : spec_.sma_lags) n.push_back("sma." + std::to_string(l));
        n.insert(n.end(), {"omega", "alpha", "beta"});
        if (has_shape_) n.push_back(spec_.innovation == Family::StudentT ? "dof" : "shape");
        return n;
    }

    std::vector<double> to_natural(const ModelParams& p) const {
        std::vector<double> v{p.constant};
        for (int l : spec_.ar_lags) v.push_back(p.ar.at(l));
        for (int l : spec_.ma_lags) v.push_back(p.ma.at(l));
        for (int l : spec_.sar_lags) v.push_back(p.sar.at(l));
        for (int l : spec_.sma_lags) v.push_back(p.sma.at(l));
        v.insert(v.end(), {p.garch_omega, p.garch_alpha, p.garch_beta});
        if (has_shape_) v.push_back(p.dist_shape.value_or(default_shape(spec_.innovation)));
        return v;
    }

    /// `fixed_shape` supplies the shape when it is not a free parameter.
    ModelParams from_natural(std::span<const double> v, std::optional<double> fixed_shape) const {
        ModelParams p;
        std::size_t i = 0;
        p.constant = v[i++];
        for (int l : spec_.ar_lags) p.ar[l] = v[i++];
        for (int l : spec_.ma_lags) p.ma[l] = v[i++];
        for (int l : spec_.sar_lags) p.sar[l] = v[i++];
        for (int l : spec_.sma_lags) p.sma[l] = v[i++];
        p.garch_omega = v[i++];
        p.garch_alpha = v[i++];
        p.garch_beta = v[i++];
        if (has_shape_) p.dist_shape = v[i++];
        else if (spec_.innovation != Family::Normal) p.dist_shape = fixed_shape;
        return p;
    }

    std::vector<double> to_unconstrained(std::span<const double> natural) const {
        std::vector<double> u(natural.begin(), natural.end());
        const std::size_t g = garch_offset();
        const double omega = natural[g], alpha = natural[g + 1], beta = natural[g + 2];
        const double total = std::clamp((alpha + beta) / kStationarityBudget, 1e-8, 1.0 - 1e-8);
        const double share = std::clamp(alpha / std::max(alpha + beta, 1e-300), 1e-8, 1.0 - 1e-8);
        u[g] = std::log(omega);
        u[g + 1] = logit(total);
        u[g + 2] = logit(share);
        if (has_shape_ && spec_.innovation == Family::StudentT) u[g + 3] = std::log(natural[g + 3] - 2.0);
        return u;
    }

    std::vector<double> to_natural_from_unconstrained(std::span<const double> u) const {
        std::vector<double> v(u.begin(), u.end());
        const std::size_t g = garch_offset();
        const double total = kStationarityBudget * sigmoid(u[g + 1]);
        const double share = sigmoid(u[g + 2]);
        v[g] = std::exp(u[g]);
        v[g + 1] = total * share;
        v[g + 2] = total * (1.0 - share);
        if (has_shape_ && spec_.innovation == Family::StudentT) v[g + 3] = 2.0 + std::exp(u[g + 3]);
        return v;
    }

    std::size_t garch_offset() const {
        return 1 + spec_.ar_lags.size() + spec_.ma_lags.size() + spec_.sar_lags.size() + spec_.sma_lags.size();
    }

private:
    static double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
    static double logit(double p) { return std::log(p / (1.0 - p)); }

    ModelSpec spec_;
    bool has_shape_;
};

/// Mean coefficients 0, c = sample mean, omega = 0.1 * sample variance,
/// alpha = 0.1, beta = 0.8, shape 0 (skew-normal) or 8 (Student-t).
inline ModelParams default_start(const ModelSpec& spec, std::span<const double> returns) {
    const double n = static_cast<double>(returns.size());
    const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
    double var = 0.0;
    for (double r : returns) var += (r - mean) * (r - mean);
    var /= n;
    ModelParams p;
    p.constant = mean;
    for (int l : spec.ar_lags) p.ar[l] = 0.0;
    for (int l : spec.ma_lags) p.ma[l] = 0.0;
    for (int l : spec.sar_lags) p.sar[l] = 0.0;
    for (int l : spec.sma_lags) p.sma[l] = 0.0;
    p.garch_omega = var > 0.0 ? 0.1 * var : 1e-6;
    p.garch_alpha = 0.1;
    p.garch_beta = 0.8;
    if (spec.innovation != Family::Normal) p.dist_shape = default_shape(spec.innovation);
    return p;
}

namespace detail {

/// Central-difference Hessian with step 1e-4 relative to each coordinate.
template <class F>
std::optional<Eigen::MatrixXd> numerical_hessian(F&& f, const std::vector<double>& x) {
    const std::size_t k = x.size();
    std::vector<double> h(k);
    for (std::size_t i = 0; i < k; ++i) h[i] = 1e-4 * std::max(std::abs(x[i]), 1e-3);
    Eigen::MatrixXd H(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    std::vector<double> y = x;
    auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
        y = x;
        y[i] += di;
        y[j] += dj;
        return f(y);
    };
    const double f0 = f(x);
    for (std::size_t i = 0; i < k; ++i) {
        const double fp = at(i, h[i], i, 0.0), fm = at(i, -h[i], i, 0.0);
        H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (std::size_t j = 0; j < i; ++j) {
            const double v = (at(i, h[i], j, h[j]) - at(i, h[i], j, -h[j]) - at(i, -h[i], j, h[j]) +
                              at(i, -h[i], j, -h[j])) /
                             (4.0 * h[i] * h[j]);
            H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    if (!H.allFinite()) return std::nullopt;
    return H;
}

}  // namespace detail

/// Conditional maximum likelihood via Nelder-Mead on the unconstrained
/// parameterization, with standard errors from the numerical Hessian.
inline FittedModel fit(const ModelSpec& spec, std::span<const double> returns, const FitOptions& opts = {}) {
    spec.validate();
    const ParameterLayout layout(spec, opts.estimate_shape);
    const std::size_t k = layout.size();
    const std::size_t max_lag = static_cast<std::size_t>(max_combined_lag(spec));
    if (returns.size() < 10 * k || returns.size() <= 3 * max_lag)
        throw DataError("fit: " + std::to_string(returns.size()) + " observations are insufficient for " +
                        std::to_string(k) + " parameters and max lag " + std::to_string(max_lag));

    const ModelParams start = opts.start.value_or(default_start(spec, returns));
    validate(spec, start);
    std::optional<double> fixed_shape;
    if (spec.innovation != Family::Normal) fixed_shape = start.dist_shape.value_or(default_shape(spec.innovation));

    auto natural_loglik = [&](std::span<const double> natural) {
        try {
            return log_likelihood(spec, layout.from_natural(natural, fixed_shape), returns);
        } catch (const ModelError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
    auto objective = [&](std::span<const double> u) {
        return -natural_loglik(layout.to_natural_from_unconstrained(u));
    };

    const auto start_natural = layout.to_natural(start);
    const double start_loglik = natural_loglik(start_natural);

    // initial simplex edges in unconstrained space
    double sd = 0.0;
    {
        const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size());
        for (double r : returns) sd += (r - mean) * (r - mean);
        sd = std::sqrt(sd / static_cast<double>(returns.size()));
    }
    std::vector<double> steps(k, 0.1);
    steps[0] = sd > 0.0 ? 0.1 * sd : 0.01;
    const std::size_t g = layout.garch_offset();
    steps[g] = steps[g + 1] = steps[g + 2] = 0.5;
    if (layout.has_shape()) steps[g + 3] = 0.5;

    NelderMeadOptions nm;
    nm.tolerance = opts.tolerance;
    nm.max_iterations = opts.max_iterations;

    std::optional<NelderMeadResult> best;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    for (int run = 0; run <= opts.restarts; ++run) {
        auto natural = start_natural;
        if (run > 0) {
            for (auto& v : natural) v *= 1.0 + jitter(rng);
            double& alpha = natural[g + 1];
            double& beta = natural[g + 2];
            if (alpha + beta >= ParameterLayout::kStationarityBudget) {
                const double s = 0.99 / (alpha + beta);
                alpha *= s;
                beta *= s;
            }
        }
        auto res = nelder_mead(objective, layout.to_unconstrained(natural), steps, nm);
        if (!best || res.value < best->value) best = std::move(res);
    }

    FittedModel fm;
    fm.spec = spec;
    const auto opt_natural = layout.to_natural_from_unconstrained(best->x);
    fm.params = layout.from_natural(opt_natural, fixed_shape);
    if (!std::isfinite(best->value)) throw ModelError("fit: no admissible parameter vector found");
    fm.loglik = -best->value;
    if (fm.loglik < start_loglik) {
        // the unconstrained round trip clamps alpha/beta shares, which can nudge the start
        fm.params = start;
        fm.loglik = start_loglik;
    }
    fm.converged = best->converged;
    fm.iterations = best->iterations;
    if (!fm.converged) fm.warnings.push_back("optimizer hit the iteration cap without converging");

    fm.num_params = k;
    fm.n_obs = returns.size() - max_lag;
    fm.aic = aic(fm.loglik, k);
    fm.bic = bic(fm.loglik, k, fm.n_obs);
    fm.filter = filter(spec, fm.params, returns);
    fm.ar_stationary = is_stationary(fm.params);
    fm.ma_invertible = is_invertible(fm.params);
    if (!fm.ar_stationary) fm.warnings.push_back("fitted AR polynomial has a root on or inside the unit circle");
    if (!fm.ma_invertible) fm.warnings.push_back("fitted MA polynomial is not invertible");

    const auto final_natural = layout.to_natural(fm.params);
    auto H = detail::numerical_hessian([&](const std::vector<double>& x) { return -natural_loglik(x); },
                                       final_natural);
    bool have_se = false;
    if (H) {
        Eigen::LLT<Eigen::MatrixXd> llt(*H);
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(H->rows(), H->cols()));
            const auto names = layout.names();
            have_se = true;
            for (std::size_t i = 0; i < k; ++i) {
                const double var = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
                if (!(var > 0.0) || !std::isfinite(var)) {
                    have_se = false;
                    break;
                }
                const double se = std::sqrt(var);
                const double t = final_natural[i] / se;
                fm.std_errors[names[i]] = se;
                fm.t_stats[names[i]] = t;
                fm.p_values[names[i]] = std::erfc(std::abs(t) / std::sqrt(2.0));
            }
        }
    }
    if (!have_se) {
        fm.std_errors.clear();
        fm.t_stats.clear();
        fm.p_values.clear();
        fm.warnings.push_back("Hessian not positive definite; standard errors unavailable");
    }
    return fm;
}

struct CandidateOutcome {
    std::size_t index = 0;
    bool ok = false;
    double criterion = std::numeric_limits<double>::infinity();
    std::size_t num_params = 0;
    std::string error;
};

struct SelectionResult {
    FittedModel best;
    std::size_t best_index = 0;
    std::vector<CandidateOutcome> candidates;
};

/// Fits every candidate and keeps the one with the smallest criterion; ties
/// go to fewer parameters, then to the earlier candidate. `options_for(i)`
/// supplies candidate i's fit options.
template <class OptionsFor>
SelectionResult select_with(std::span<const ModelSpec> candidates, std::span<const double> returns,
                            Criterion criterion, OptionsFor&& options_for) {
    if (candidates.empty()) throw std::invalid_argument("select: no candidates");
    SelectionResult out;
    std::optional<FittedModel> best;
    std::string failures;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        CandidateOutcome oc;
        oc.index = i;
        try {
            auto fm = fit(candidates[i], returns, options_for(i));
            oc.ok = true;
            oc.criterion = fm.criterion(criterion);
            oc.num_params = fm.num_params;
            const bool better = !best || oc.criterion < best->criterion(criterion) ||
                                (oc.criterion == best->criterion(criterion) && oc.num_params < best->num_params);
            if (better) {
                best = std::move(fm);
                out.best_index = i;
            }
        } catch (const std::exception& e) {
            oc.error = e.what();
            failures += "\n  candidate " + std::to_string(i) + ": " + e.what();
        }
        out.candidates.push_back(std::move(oc));
    }
    if (!best) throw ModelError("select: every candidate failed to fit:" + failures);
    out.best = std::move(*best);
    return out;
}

/// Candidate i is fitted with seed opts.seed + i.
inline SelectionResult select(std::span<const ModelSpec> candidates, std::span<const double> returns,
                              Criterion criterion, const FitOptions& opts = {}) {
    return select_with(candidates, returns, criterion, [&](std::size_t i) {
        FitOptions o = opts;
        o.seed = opts.seed + i;
        return o;
    });
}

}  // namespace stlf
