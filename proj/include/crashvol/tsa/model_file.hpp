#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "crashvol/data/year_month.hpp"
#include "crashvol/io/kv_file.hpp"
#include "crashvol/sim/quantiles.hpp"
#include "crashvol/tsa/arima.hpp"
#include "crashvol/tsa/garch.hpp"

namespace crashvol::tsa {

/// Fitted ARIMA (optionally with GARCH errors) plus the training series it
/// forecasts from. `start` is the first forecast month.
struct TimeSeriesModel {
    ArimaSpec arima;
    std::optional<GarchSpec> garch;
    data::YearMonth start;
    std::vector<double> history;
};

/**
 * Flat `key = value` model file:
 *   model = arima | arima-garch, p, d, q, ar.<i>, ma.<j>, intercept,
 *   has_intercept, log_levels, sigma2, css, start_year, start_month,
 *   history (comma list), and for arima-garch: garch.p, garch.q,
 *   garch.omega, garch.alpha.<i>, garch.beta.<j>, garch.loglik.
 * Residuals are rebuilt from `history` on load.
 */
io::KeyValueFile to_key_values(const TimeSeriesModel& model);
TimeSeriesModel time_series_model_from(const io::KeyValueFile& file);

void write_time_series_model(const std::filesystem::path& path, const TimeSeriesModel& model);
TimeSeriesModel read_time_series_model(const std::filesystem::path& path);

/// Point forecasts with Gaussian bands. The h-step variance is
/// Σ_{j<h} ψ_j²·σ²_{h-j}, where σ² is sigma2 or the GARCH forecast.
/// Log-level models are exponentiated, so their "median" is exp(mean).
sim::ForecastQuantiles forecast_time_series(const TimeSeriesModel& model, std::size_t horizon,
                                            std::span<const double> levels);

}  // namespace crashvol::tsa
