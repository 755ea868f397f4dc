#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "crashvol/io/kv_file.hpp"
#include "crashvol/sim/heston.hpp"
#include "crashvol/sim/vasicek.hpp"

namespace crashvol::sim {

/// A stochastic rate model plus the observed rates preceding its start.
struct StochasticModel {
    std::variant<HestonParams, VasicekParams> params;
    std::vector<double> history_tail;
};

/**
 * Flat `key = value` parameter file. Heston keys:
 *   model = heston, c1, mu, v0_vol, theta_vol, kappa, xi, rho, dt,
 *   scheme (reflect|truncate), start_year, start_month,
 *   spike.<month>.mean, spike.<month>.std, history_tail (comma list)
 * Vasicek uses model = vasicek with c1, mu, kappa, sigma in place of the
 * variance keys. v0_vol/theta_vol are volatilities; they are squared on load.
 */
io::KeyValueFile to_key_values(const StochasticModel& model);
StochasticModel stochastic_model_from(const io::KeyValueFile& file);

void write_stochastic_model(const std::filesystem::path& path, const StochasticModel& model);
StochasticModel read_stochastic_model(const std::filesystem::path& path);

}  // namespace crashvol::sim
