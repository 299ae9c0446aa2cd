#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace stlf {

struct NelderMeadOptions {
    /// Converged once a full simplex cycle (run to collapse, then restarted
    /// at the incumbent) improves the objective by less than this.
    double tolerance = 1e-8;
    std::size_t max_iterations = 20000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t cycles = 0;
    bool converged = false;
};

/// Derivative-free minimization. `steps` gives the initial simplex edge per
/// coordinate; the objective may return +inf to reject a point.
template <class Objective>
NelderMeadResult nelder_mead(Objective&& objective, std::vector<double> start, std::span<const double> steps,
                             const NelderMeadOptions& opts = {}) {
    const std::size_t dim = start.size();
    NelderMeadResult res;
    res.x = std::move(start);
    res.value = objective(std::span<const double>(res.x));
    if (dim == 0) {
        res.converged = true;
        return res;
    }

    std::vector<std::vector<double>> simplex(dim + 1);
    std::vector<double> fvals(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    std::vector<std::size_t> order(dim + 1);

    auto eval = [&](const std::vector<double>& x) {
        const double v = objective(std::span<const double>(x));
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    while (res.iterations < opts.max_iterations) {
        const double cycle_start = res.value;
        simplex[0] = res.x;
        fvals[0] = res.value;
        for (std::size_t i = 0; i < dim; ++i) {
            simplex[i + 1] = res.x;
            simplex[i + 1][i] += steps[i];
            fvals[i + 1] = eval(simplex[i + 1]);
        }

        while (res.iterations < opts.max_iterations) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

            if (std::isfinite(fvals[worst]) && fvals[worst] - fvals[best] < opts.tolerance) break;
            double extent = 0.0;
            for (std::size_t i = 0; i <= dim; ++i)
                for (std::size_t j = 0; j < dim; ++j)
                    extent = std::max(extent, std::abs(simplex[i][j] - simplex[best][j]));
            if (extent < 1e-14) break;

            ++res.iterations;
            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i <= dim; ++i)
                if (i != worst)
                    for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);

            for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
            const double fr = eval(trial);
            if (fr < fvals[best]) {
                for (std::size_t j = 0; j < dim; ++j) trial2[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]);
                const double fe = eval(trial2);
                if (fe < fr) {
                    simplex[worst] = trial2;
                    fvals[worst] = fe;
                } else {
                    simplex[worst] = trial;
                    fvals[worst] = fr;
                }
                continue;
            }
            if (fr < fvals[second]) {
                simplex[worst] = trial;
                fvals[worst] = fr;
                continue;
            }
            // contraction, outside if the reflection helped at all
            const bool outside = fr < fvals[worst];
            for (std::size_t j = 0; j < dim; ++j)
                trial2[j] = outside ? centroid[j] + 0.5 * (trial[j] - centroid[j])
                                    : centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
            const double fc = eval(trial2);
            if (fc < (outside ? fr : fvals[worst])) {
                simplex[worst] = trial2;
                fvals[worst] = fc;
                continue;
            }
            // shrink toward the best vertex
            for (std::size_t i = 0; i <= dim; ++i) {
                if (i == best) continue;
                for (std::size_t j = 0; j < dim; ++j)
                    simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
                fvals[i] = eval(simplex[i]);
            }
        }

        const auto best_it = std::min_element(fvals.begin(), fvals.end());
        if (*best_it <= res.value) {
            res.value = *best_it;
            res.x = simplex[static_cast<std::size_t>(best_it - fvals.begin())];
        }
        ++res.cycles;
        if (std::isfinite(cycle_start) && cycle_start - res.value < opts.tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace stlf
