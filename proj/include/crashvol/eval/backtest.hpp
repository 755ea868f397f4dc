#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crashvol/data/monthly_series.hpp"
#include "crashvol/eval/calibration.hpp"
#include "crashvol/eval/metrics.hpp"
#include "crashvol/io/kv_file.hpp"
#include "crashvol/sim/quantiles.hpp"

namespace crashvol::eval {

enum class ModelKind { Heston, Vasicek, Arima, ArimaGarch };

std::string_view to_string(ModelKind kind) noexcept;
/// "heston" | "vasicek" | "arima" | "arima-garch"; throws Error(Usage).
ModelKind parse_model_kind(std::string_view text);

struct ModelConfig {
    ModelKind kind = ModelKind::Heston;
    CalibrationOptions calibration;
    int p = 1;
    int d = 2;
    int q = 2;
    int garch_p = 2;
    int garch_q = 1;
    bool log_levels = false;
    std::size_t n_paths = 5000;
    std::vector<double> levels{0.05, 0.25, 0.75, 0.95};
    unsigned threads = 0;
    /// When set, used as-is instead of fitting on the train window.
    std::optional<io::KeyValueFile> parameters;
    /// Applied to the fitted parameter file before forecasting.
    std::vector<std::pair<std::string, std::string>> overrides;
};

/// Fits `config.kind` on [train_start, train_end] (or takes
/// `config.parameters`) and returns the parameter file with overrides
/// applied. A fitted model's forecast starts the month after train_end.
io::KeyValueFile fit_model(const data::MonthlySeries& series, data::YearMonth train_start,
                           data::YearMonth train_end, const ModelConfig& config);

/// Forecast quantiles from any parameter file written by fit_model. The
/// stochastic models use `n_paths` and `seed`; the ARIMA family ignores them.
sim::ForecastQuantiles forecast_model(const io::KeyValueFile& parameters, std::size_t horizon,
                                      std::size_t n_paths, std::uint64_t seed,
                                      std::span<const double> levels, unsigned threads = 0);

struct BacktestResult {
    io::KeyValueFile parameters;
    sim::ForecastQuantiles forecast;
    ErrorReport report;  // median forecast vs observed
};

/**
 * @brief Fit on the train window, forecast the test window, score the median.
 *
 * The test window must start the month after the train window ends; both
 * must lie inside `series`. Overlapping or non-adjacent windows raise
 * Error(Range).
 */
BacktestResult backtest(const data::MonthlySeries& series, data::YearMonth train_start,
                        data::YearMonth train_end, data::YearMonth test_start,
                        data::YearMonth test_end, const ModelConfig& config, std::uint64_t seed);

}  // namespace crashvol::eval
