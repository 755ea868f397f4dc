#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crashvol/data/year_month.hpp"
#include "crashvol/sim/components.hpp"
#include "crashvol/sim/paths.hpp"

namespace crashvol::sim {

/**
 * @brief Parameters of the state-independent Heston crash-rate model.
 *
 *   dC_t = mu·C1·dt + sqrt(v_t)·C1·dW^C_t + avg_t·G_t
 *   dv_t = kappa·(theta − v_t)·dt + xi·sqrt(v_t)·dW^v_t,   corr(dW^C, dW^v) = rho
 *
 * Rates are fractions; mu, theta, kappa, xi are per year. v0 and theta are
 * variances (squared annual volatility).
 */
struct HestonParams {
    double c1 = 0.0;
    double mu = 0.0;
    double v0 = 0.0;
    double theta = 0.0;
    double kappa = 0.0;
    double xi = 0.0;
    double rho = 0.0;
    std::vector<SpikeSpec> spikes;
    data::YearMonth start{2000, 1};
    double dt = 1.0 / 12.0;
    Scheme scheme = Scheme::Reflect;

    /// kappa > xi² / (2·theta) with theta in variance units.
    [[nodiscard]] bool feller_satisfied() const noexcept;

    /// Human-readable list of violated invariants; empty when valid.
    [[nodiscard]] std::vector<std::string> violations() const;

    /// Throws Error(Validation) listing every violation. Logs a warning
    /// (without failing) when the Feller condition does not hold.
    void validate() const;
};

/// xi² / (2·theta_vol): the kappa threshold when the long-run level is
/// quoted as a volatility rather than a variance. Throws Error(Domain) for
/// theta_vol ≤ 0.
double feller_bound(double xi, double theta_vol);

/// One Euler step of the variance with the configured boundary scheme.
double step_variance(double v, const HestonParams& params, double dt, double z_v);

/// One Euler step of the base rate; increments scale with C1, not the state.
double step_rate(double c_prev, const HestonParams& params, double v, double dt, double z_c);

struct SimulationOptions {
    unsigned threads = 0;  // 0: hardware concurrency
};

/**
 * @brief Monte Carlo paths of the amended Heston model.
 *
 * Path p draws from substream (seed, p) in the fixed order z_c, z_v and then,
 * in a spike month, the spike draw. Output is identical for any thread count.
 */
SimulationResult simulate_heston(const HestonParams& params, std::size_t horizon,
                                 std::size_t n_paths, std::uint64_t seed,
                                 std::span<const double> history_tail,
                                 const SimulationOptions& options = {});

}  // namespace crashvol::sim
