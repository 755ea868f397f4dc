#include "crashvol/tsa/model_file.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/io/csv.hpp"

namespace crashvol::tsa {

namespace {

std::vector<double> read_indexed(const io::KeyValueFile& kv, std::string_view prefix, int count) {
    std::vector<double> out;
    for (int i = 1; i <= count; ++i) out.push_back(kv.require_double(fmt::format("{}.{}", prefix, i)));
    return out;
}

void put_indexed(io::KeyValueFile& kv, std::string_view prefix, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) kv.set(fmt::format("{}.{}", prefix, i + 1), values[i]);
}

bool parse_bool(const std::string& text, std::string_view key) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw Error(ErrorCode::Parse, fmt::format("{}: expected true or false, got '{}'", key, text));
}

int require_order(const io::KeyValueFile& kv, std::string_view key) {
    const auto v = kv.require_integer(key);
    if (v < 0 || v > 64) throw Error(ErrorCode::Parse, fmt::format("{} = {} is out of range", key, v));
    return static_cast<int>(v);
}

}  // namespace

io::KeyValueFile to_key_values(const TimeSeriesModel& model) {
    const auto& a = model.arima;
    io::KeyValueFile kv;
    kv.set("model", std::string(model.garch ? "arima-garch" : "arima"));
    kv.set("p", std::to_string(a.p));
    kv.set("d", std::to_string(a.d));
    kv.set("q", std::to_string(a.q));
    put_indexed(kv, "ar", a.ar);
    put_indexed(kv, "ma", a.ma);
    kv.set("has_intercept", std::string(a.has_intercept ? "true" : "false"));
    kv.set("intercept", a.intercept);
    kv.set("log_levels", std::string(a.log_levels ? "true" : "false"));
    kv.set("sigma2", a.sigma2);
    kv.set("css", a.css);
    if (model.garch) {
        const auto& g = *model.garch;
        kv.set("garch.p", std::to_string(g.p));
        kv.set("garch.q", std::to_string(g.q));
        kv.set("garch.omega", g.omega);
        put_indexed(kv, "garch.alpha", g.alpha);
        put_indexed(kv, "garch.beta", g.beta);
        kv.set("garch.loglik", g.log_likelihood);
    }
    kv.set("start_year", std::to_string(model.start.year));
    kv.set("start_month", std::to_string(model.start.month));
    std::string history;
    for (std::size_t i = 0; i < model.history.size(); ++i) {
        if (i > 0) history += ',';
        history += io::format_roundtrip(model.history[i]);
    }
    kv.set("history", history);
    return kv;
}

TimeSeriesModel time_series_model_from(const io::KeyValueFile& kv) {
    const auto kind = kv.require("model");
    if (kind != "arima" && kind != "arima-garch") {
        throw Error(ErrorCode::Parse, fmt::format("unknown time-series model '{}'", kind));
    }
    TimeSeriesModel model;
    auto& a = model.arima;
    a.p = require_order(kv, "p");
    a.d = require_order(kv, "d");
    a.q = require_order(kv, "q");
    a.ar = read_indexed(kv, "ar", a.p);
    a.ma = read_indexed(kv, "ma", a.q);
    a.has_intercept = parse_bool(kv.get("has_intercept").value_or("false"), "has_intercept");
    a.intercept = kv.get_double("intercept", 0.0);
    a.log_levels = parse_bool(kv.get("log_levels").value_or("false"), "log_levels");
    a.sigma2 = kv.require_double("sigma2");
    a.css = kv.get_double("css", 0.0);
    model.start = data::YearMonth{static_cast<int>(kv.require_integer("start_year")),
                                  static_cast<int>(kv.require_integer("start_month"))};
    if (!model.start.valid()) throw Error(ErrorCode::Parse, "start_month outside 1..12");
    model.history = io::parse_double_list(kv.require("history"), "history");
    a.validate();

    std::vector<double> y = model.history;
    if (a.log_levels) {
        for (double& v : y) v = std::log(v);
    }
    a.residuals = css_residuals(difference(y, a.d), a.ar, a.ma, a.has_intercept ? a.intercept : 0.0);

    if (kind == "arima-garch") {
        GarchSpec g;
        g.p = require_order(kv, "garch.p");
        g.q = require_order(kv, "garch.q");
        g.omega = kv.require_double("garch.omega");
        g.alpha = read_indexed(kv, "garch.alpha", g.p);
        g.beta = read_indexed(kv, "garch.beta", g.q);
        g.log_likelihood = kv.get_double("garch.loglik", 0.0);
        g.validate();
        model.garch = g;
    }
    return model;
}

void write_time_series_model(const std::filesystem::path& path, const TimeSeriesModel& model) {
    to_key_values(model).write(path);
}

TimeSeriesModel read_time_series_model(const std::filesystem::path& path) {
    return time_series_model_from(io::KeyValueFile::read(path));
}

sim::ForecastQuantiles forecast_time_series(const TimeSeriesModel& model, std::size_t horizon,
                                            std::span<const double> levels) {
    sim::validate_levels(levels);
    const auto& a = model.arima;
    std::vector<double> mean;
    std::vector<double> innovation_var;
    if (model.garch) {
        auto f = forecast_arima_garch(a, *model.garch, model.history, horizon);
        mean = std::move(f.mean);
        innovation_var = std::move(f.variance);
    } else {
        mean = forecast_arima(a, model.history, horizon);
        innovation_var.assign(horizon, a.sigma2);
    }
    // Bands are built on the modelling scale, then mapped back.
    std::vector<double> centre = mean;
    if (a.log_levels) {
        for (double& v : centre) v = std::log(v);
    }
    const auto psi = psi_weights(a, horizon);
    std::vector<double> sd(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double var = 0.0;
        for (std::size_t j = 0; j <= h; ++j) var += psi[j] * psi[j] * innovation_var[h - j];
        sd[h] = std::sqrt(var);
    }

    sim::ForecastQuantiles out;
    out.start = model.start;
    out.levels.assign(levels.begin(), levels.end());
    out.median = mean;
    const boost::math::normal standard;
    for (double level : levels) {
        const double z = boost::math::quantile(standard, level);
        std::vector<double> band(horizon);
        for (std::size_t h = 0; h < horizon; ++h) {
            const double v = centre[h] + z * sd[h];
            band[h] = a.log_levels ? std::exp(v) : v;
        }
        out.bands.push_back(std::move(band));
    }
    return out;
}

}  // namespace crashvol::tsa
