#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crashvol/data/year_month.hpp"
#include "crashvol/sim/paths.hpp"

namespace crashvol::sim {

/// Per-month median and quantile bands across Monte Carlo paths.
struct ForecastQuantiles {
    data::YearMonth start;
    std::vector<double> levels;               // sorted, unique, in (0, 1)
    std::vector<double> median;               // per month
    std::vector<std::vector<double>> bands;   // bands[level][month]

    [[nodiscard]] std::size_t horizon() const noexcept { return median.size(); }
    /// Band for `level`; throws Error(Range) when it was not computed.
    [[nodiscard]] std::span<const double> band(double level) const;
};

/// Linear-interpolation sample quantile (Hyndman–Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double level);

/// Empirical quantiles of `result.rates` at every month.
ForecastQuantiles forecast_quantiles(const SimulationResult& result, std::span<const double> levels);

/// Validates a level list: sorted ascending, unique, each in (0, 1).
void validate_levels(std::span<const double> levels);

/// Column label for a level: 0.05 → "q05", 0.975 → "q97.5".
std::string level_label(double level);
/// Inverse of level_label; throws Error(Parse).
double parse_level_label(std::string_view label);

/// CSV `year,month,median,<q labels...>` with 10 significant digits.
std::string forecast_to_csv(const ForecastQuantiles& forecast);
ForecastQuantiles forecast_from_csv(std::string_view text, std::string_view source = "<text>");

}  // namespace crashvol::sim
