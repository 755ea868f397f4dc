#include "crashvol/optim/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace crashvol::optim {

namespace {

double safe_eval(const Objective& f, std::span<const double> x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0,
                             const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    NelderMeadResult result;
    if (n == 0) {
        result.value = safe_eval(f, x0);
        result.converged = true;
        return result;
    }

    std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < n; ++i) {
        const double step = x0[i] != 0.0 ? options.initial_step * std::max(1.0, std::abs(x0[i]))
                                         : options.initial_step;
        simplex[i + 1][i] += step;
    }
    std::vector<double> fx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fx[i] = safe_eval(f, simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    const auto along = [&](std::vector<double>& out, double scale) {
        const auto& worst = simplex[order[n]];
        for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + scale * (worst[j] - centroid[j]);
    };

    int iter = 0;
    bool converged = false;
    for (; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const double best = fx[order[0]];
        const double worst = fx[order[n]];
        if (std::isfinite(worst) &&
            worst - best <= options.tolerance * std::max(1.0, std::abs(best))) {
            converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[order[k]][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        const double second_worst = fx[order[n - 1]];
        along(trial, -1.0);  // reflection
        const double f_reflect = safe_eval(f, trial);
        if (f_reflect < best) {
            along(trial2, -2.0);  // expansion
            const double f_expand = safe_eval(f, trial2);
            if (f_expand < f_reflect) {
                simplex[order[n]] = trial2;
                fx[order[n]] = f_expand;
            } else {
                simplex[order[n]] = trial;
                fx[order[n]] = f_reflect;
            }
            continue;
        }
        if (f_reflect < second_worst) {
            simplex[order[n]] = trial;
            fx[order[n]] = f_reflect;
            continue;
        }
        // Contraction: outside if the reflected point beat the worst, else inside.
        const bool outside = f_reflect < worst;
        along(trial2, outside ? -0.5 : 0.5);
        const double f_contract = safe_eval(f, trial2);
        if (f_contract < (outside ? f_reflect : worst)) {
            simplex[order[n]] = trial2;
            fx[order[n]] = f_contract;
            continue;
        }
        // Shrink towards the best vertex.
        const auto& xb = simplex[order[0]];
        for (std::size_t k = 1; k <= n; ++k) {
            auto& v = simplex[order[k]];
            for (std::size_t j = 0; j < n; ++j) v[j] = xb[j] + 0.5 * (v[j] - xb[j]);
            fx[order[k]] = safe_eval(f, v);
        }
    }

    const auto best_it = std::min_element(fx.begin(), fx.end());
    const auto best_idx = static_cast<std::size_t>(best_it - fx.begin());
    result.x = simplex[best_idx];
    result.value = *best_it;
    result.iterations = iter;
    result.converged = converged;
    return result;
}

NelderMeadResult minimize(const Objective& f, std::span<const double> x0,
                          const NelderMeadOptions& options) {
    std::mt19937_64 rng(options.jitter_seed);
    std::uniform_real_distribution<double> jitter(-options.jitter, options.jitter);

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.x.assign(x0.begin(), x0.end());
    int total_iterations = 0;
    const int starts = std::max(1, options.starts);
    for (int s = 0; s < starts; ++s) {
        std::vector<double> start(x0.begin(), x0.end());
        if (s > 0) {
            for (double& v : start) v += jitter(rng);
        }
        auto run = nelder_mead(f, start, options);
        total_iterations += run.iterations;
        if (run.value < best.value) best = std::move(run);
    }
    auto polished = nelder_mead(f, best.x, options);
    total_iterations += polished.iterations;
    if (polished.value <= best.value) {
        best = std::move(polished);
    } else {
        best.converged = polished.converged;
    }
    best.iterations = total_iterations;
    return best;
}

}  // namespace crashvol::optim
