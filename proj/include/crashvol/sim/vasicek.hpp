#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crashvol/data/year_month.hpp"
#include "crashvol/sim/components.hpp"
#include "crashvol/sim/heston.hpp"
#include "crashvol/sim/paths.hpp"

namespace crashvol::sim {

/**
 * Amended Vasicek baseline:
 *   dC_t = kappa·(target(t) − C_t)·dt + sigma·C1·dW_t + avg_t·G_t,
 *   target(t) = C1·(1 + mu)^t, t in years since the forecast start
 *   (evaluated at the start of each Euler step).
 */
struct VasicekParams {
    double c1 = 0.0;
    double mu = 0.0;
    double kappa = 0.0;
    double sigma = 0.0;
    std::vector<SpikeSpec> spikes;
    data::YearMonth start{2000, 1};
    double dt = 1.0 / 12.0;
    Scheme scheme = Scheme::Reflect;

    [[nodiscard]] std::vector<std::string> violations() const;
    void validate() const;

    [[nodiscard]] double target(double years_elapsed) const noexcept;
};

/// Mean-reversion speed implied by an AR(1) slope on monthly data:
/// −12·ln(slope), clamped to [0, 12] so one Euler step never overshoots.
double vasicek_kappa_from_ar1(double slope);

SimulationResult simulate_vasicek(const VasicekParams& params, std::size_t horizon,
                                  std::size_t n_paths, std::uint64_t seed,
                                  std::span<const double> history_tail,
                                  const SimulationOptions& options = {});

}  // namespace crashvol::sim
