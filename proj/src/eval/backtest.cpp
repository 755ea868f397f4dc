#include "crashvol/eval/backtest.hpp"

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/sim/heston.hpp"
#include "crashvol/sim/param_file.hpp"
#include "crashvol/sim/vasicek.hpp"
#include "crashvol/tsa/model_file.hpp"

namespace crashvol::eval {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Heston: return "heston";
        case ModelKind::Vasicek: return "vasicek";
        case ModelKind::Arima: return "arima";
        case ModelKind::ArimaGarch: return "arima-garch";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
    for (auto kind : {ModelKind::Heston, ModelKind::Vasicek, ModelKind::Arima, ModelKind::ArimaGarch}) {
        if (text == to_string(kind)) return kind;
    }
    throw Error(ErrorCode::Usage,
                fmt::format("unknown model '{}' (expected heston, vasicek, arima or arima-garch)", text));
}

namespace {

io::KeyValueFile fit_parameters(const data::MonthlySeries& series, data::YearMonth train_start,
                                data::YearMonth train_end, const ModelConfig& config) {
    io::KeyValueFile kv;
    switch (config.kind) {
        case ModelKind::Heston:
            kv = sim::to_key_values(calibrate_heston(series, train_start, train_end, config.calibration));
            break;
        case ModelKind::Vasicek:
            kv = sim::to_key_values(calibrate_vasicek(series, train_start, train_end, config.calibration));
            break;
        case ModelKind::Arima:
        case ModelKind::ArimaGarch: {
            const auto train = data::slice_window(series, train_start, train_end);
            tsa::ArimaOptions options;
            options.log_levels = config.log_levels;
            tsa::TimeSeriesModel model;
            model.arima = tsa::fit_arima(train.rates(), config.p, config.d, config.q, options);
            if (config.kind == ModelKind::ArimaGarch) {
                model.garch = tsa::fit_garch(model.arima.residuals, config.garch_p, config.garch_q);
            }
            model.start = train_end.plus_months(1);
            const auto r = train.rates();
            model.history.assign(r.begin(), r.end());
            kv = tsa::to_key_values(model);
            break;
        }
    }
    return kv;
}

}  // namespace

io::KeyValueFile fit_model(const data::MonthlySeries& series, data::YearMonth train_start,
                           data::YearMonth train_end, const ModelConfig& config) {
    auto kv = config.parameters ? *config.parameters
                                : fit_parameters(series, train_start, train_end, config);
    for (const auto& [key, value] : config.overrides) {
        if (!kv.contains(key) && key.rfind("spike.", 0) != 0) {
            throw Error(ErrorCode::Usage,
                        fmt::format("override '{}' is not a parameter of model {}", key, kv.require("model")));
        }
        kv.set(key, value);
    }
    return kv;
}

sim::ForecastQuantiles forecast_model(const io::KeyValueFile& parameters, std::size_t horizon,
                                      std::size_t n_paths, std::uint64_t seed,
                                      std::span<const double> levels, unsigned threads) {
    sim::validate_levels(levels);
    if (horizon == 0) throw Error(ErrorCode::Validation, "forecast horizon must be >= 1");
    const auto kind = parameters.require("model");
    if (kind == "arima" || kind == "arima-garch") {
        return tsa::forecast_time_series(tsa::time_series_model_from(parameters), horizon, levels);
    }
    const auto model = sim::stochastic_model_from(parameters);
    const sim::SimulationOptions options{threads};
    const auto result = std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, sim::HestonParams>) {
                return sim::simulate_heston(p, horizon, n_paths, seed, model.history_tail, options);
            } else {
                return sim::simulate_vasicek(p, horizon, n_paths, seed, model.history_tail, options);
            }
        },
        model.params);
    return sim::forecast_quantiles(result, levels);
}

BacktestResult backtest(const data::MonthlySeries& series, data::YearMonth train_start,
                        data::YearMonth train_end, data::YearMonth test_start,
                        data::YearMonth test_end, const ModelConfig& config, std::uint64_t seed) {
    if (train_end < train_start || test_end < test_start) {
        throw Error(ErrorCode::Range, "train and test windows must be nonempty");
    }
    if (test_start <= train_end) {
        throw Error(ErrorCode::Range, fmt::format("test window {}..{} overlaps train window {}..{}",
                                                  test_start.str(), test_end.str(),
                                                  train_start.str(), train_end.str()));
    }
    if (test_start != train_end.plus_months(1)) {
        throw Error(ErrorCode::Range,
                    fmt::format("test window must start at {}, the month after training ends",
                                train_end.plus_months(1).str()));
    }
    const auto test = data::slice_window(series, test_start, test_end);
    BacktestResult out;
    out.parameters = fit_model(series, train_start, train_end, config);
    const auto horizon = static_cast<std::size_t>(data::months_inclusive(test_start, test_end));
    out.forecast = forecast_model(out.parameters, horizon, config.n_paths, seed, config.levels,
                                  config.threads);
    out.report = yearly_error_report({out.forecast.start, out.forecast.median}, dated_rates(test),
                                     out.parameters.require("model"));
    return out;
}

}  // namespace crashvol::eval
