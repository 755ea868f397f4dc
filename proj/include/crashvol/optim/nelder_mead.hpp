#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace crashvol::optim {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    int max_iterations = 2000;     // per start
    double tolerance = 1e-10;      // on f_worst - f_best, relative to max(1, |f_best|)
    double initial_step = 0.1;     // simplex edge along each axis
    int starts = 5;                // x0 plus (starts - 1) jittered copies
    double jitter = 0.25;          // half-width of the uniform jitter
    std::uint64_t jitter_seed = 0x5eed'0f'5eedULL;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;  // summed over every start
    bool converged = false;
};

/// Single simplex run from x0 (standard reflection/expansion/contraction/shrink
/// coefficients 1, 2, 0.5, 0.5). Non-finite objective values count as +inf.
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0,
                             const NelderMeadOptions& options = {});

/// Deterministic multi-start: runs from x0 and from `starts - 1` jittered
/// points, then restarts once from the best vertex found. `converged` reports
/// whether that final polishing run met the tolerance.
NelderMeadResult minimize(const Objective& f, std::span<const double> x0,
                          const NelderMeadOptions& options = {});

}  // namespace crashvol::optim
