#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crashvol/data/monthly_series.hpp"
#include "crashvol/sim/param_file.hpp"
#include "crashvol/stats/series_stats.hpp"

namespace crashvol::eval {

inline constexpr double kDefaultRho = -0.5936;
inline constexpr double kDefaultSpikeThreshold = 0.11;
inline constexpr double kFellerMargin = 1e-6;

struct CalibrationOptions {
    double rho = kDefaultRho;
    double spike_threshold = kDefaultSpikeThreshold;
    std::optional<double> c1;          // overrides the starting rate
    std::optional<double> prior_rate;  // December before the train window
    sim::Scheme scheme = sim::Scheme::Reflect;
};

/// Statistics the stochastic models are built from, all from the train window.
struct WindowStatistics {
    stats::VolatilityProfile volatility;
    stats::GrowthEstimate growth;
    stats::SeasonProfile season;
    std::vector<int> spike_months;
    std::vector<sim::SpikeSpec> spikes;
    double c1 = 0.0;
    std::string c1_source;  // "override", "observed <YYYY-MM>" or "last training month"
    std::vector<double> history_tail;  // last 12 training rates
};

/**
 * @brief Train-window statistics for stochastic model assembly.
 *
 * `series` may extend beyond the window: the month before `train_start`
 * supplies the prior December when present, and the month after `train_end`
 * supplies C1 when present (the first forecast month's observed rate).
 */
WindowStatistics window_statistics(const data::MonthlySeries& series, data::YearMonth train_start,
                                   data::YearMonth train_end, const CalibrationOptions& options);

/// v0_vol = theta_vol = window vol, xi = vol-of-vol, kappa just above the
/// Feller bound, mu = geometric growth.
sim::StochasticModel calibrate_heston(const data::MonthlySeries& series,
                                      data::YearMonth train_start, data::YearMonth train_end,
                                      const CalibrationOptions& options = {});

/// kappa from the AR(1) slope of training rates, sigma = window vol,
/// mu = geometric growth.
sim::StochasticModel calibrate_vasicek(const data::MonthlySeries& series,
                                       data::YearMonth train_start, data::YearMonth train_end,
                                       const CalibrationOptions& options = {});

/// OLS slope of r_t on r_{t-1} (with intercept).
double ar1_slope(std::span<const double> values);

}  // namespace crashvol::eval
