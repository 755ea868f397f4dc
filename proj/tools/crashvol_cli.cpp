// crashvol: command-line front end for diagnostics, model fitting,
// Monte Carlo forecasting and backtest scoring of monthly crash rates.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "crashvol/data/monthly_series.hpp"
#include "crashvol/error.hpp"
#include "crashvol/eval/backtest.hpp"
#include "crashvol/eval/report_io.hpp"
#include "crashvol/io/csv.hpp"
#include "crashvol/io/kv_file.hpp"
#include "crashvol/log.hpp"
#include "crashvol/stats/distribution.hpp"
#include "crashvol/stats/series_stats.hpp"

namespace fs = std::filesystem;
using namespace crashvol;

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string train_start, train_end, test_start, test_end;
    std::string model = "heston";
    std::string orders;
    std::size_t paths = 5000;
    std::optional<std::uint64_t> seed;
    std::string levels = "5,25,75,95";
    std::string band = "25,75";
    std::string scheme = "reflect";
    std::string out;
    std::string params;
    std::string forecast;
    std::string model_id;
    unsigned threads = 0;
    std::size_t horizon = 60;
    std::optional<double> rho, c1, prior_rate;
    double spike_threshold = eval::kDefaultSpikeThreshold;
    std::vector<std::string> sets;
    bool log_levels = false;
};

data::MonthlySeries load_inputs(const std::vector<std::string>& paths) {
    if (paths.empty()) throw Error(ErrorCode::Usage, "--input is required");
    std::vector<data::MonthlySeries> parts;
    for (const auto& p : paths) parts.push_back(data::parse_monthly_csv(p));
    return parts.size() == 1 ? parts.front() : data::merge_series(parts);
}

data::YearMonth month_or(const std::string& text, data::YearMonth fallback) {
    return text.empty() ? fallback : data::YearMonth::parse(text);
}

std::vector<double> parse_percent_list(const std::string& text, std::string_view what) {
    auto values = io::parse_double_list(text, what);
    for (double& v : values) {
        if (!(v > 0.0 && v < 100.0)) {
            throw Error(ErrorCode::Usage, fmt::format("{}: {} is not a percentage in (0, 100)", what, v));
        }
        v /= 100.0;
    }
    return values;
}

eval::ModelConfig model_config(const Options& o) {
    eval::ModelConfig c;
    c.kind = eval::parse_model_kind(o.model);
    if (o.rho) c.calibration.rho = *o.rho;
    c.calibration.c1 = o.c1;
    c.calibration.prior_rate = o.prior_rate;
    c.calibration.spike_threshold = o.spike_threshold;
    c.calibration.scheme = sim::parse_scheme(o.scheme);
    if (c.kind == eval::ModelKind::Arima || c.kind == eval::ModelKind::ArimaGarch) {
        if (!o.orders.empty()) {
            std::vector<int> v;
            for (const auto& f : io::split_csv_line(o.orders)) {
                v.push_back(static_cast<int>(io::parse_integer(f, "--orders")));
            }
            const std::size_t want = c.kind == eval::ModelKind::ArimaGarch ? 5 : 3;
            if (v.size() != want && !(v.size() == 3 && want == 5)) {
                throw Error(ErrorCode::Usage,
                            fmt::format("--orders for {} takes p,d,q{}", o.model,
                                        want == 5 ? "[,garch_p,garch_q]" : ""));
            }
            c.p = v[0];
            c.d = v[1];
            c.q = v[2];
            if (v.size() == 5) {
                c.garch_p = v[3];
                c.garch_q = v[4];
            }
        }
    } else if (!o.orders.empty()) {
        throw Error(ErrorCode::Usage, "--orders only applies to arima and arima-garch");
    }
    c.log_levels = o.log_levels;
    c.n_paths = o.paths;
    c.levels = parse_percent_list(o.levels, "--levels");
    c.threads = o.threads;
    if (!o.params.empty()) c.parameters = io::KeyValueFile::read(o.params);
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::Usage, fmt::format("--set expects key=value, got '{}'", s));
        }
        c.overrides.emplace_back(std::string(io::trim(s.substr(0, eq))),
                                 std::string(io::trim(s.substr(eq + 1))));
    }
    return c;
}

std::uint64_t require_seed(const Options& o) {
    if (!o.seed) throw Error(ErrorCode::Usage, "--seed is required for stochastic commands");
    return *o.seed;
}

void require_paths(const Options& o) {
    if (o.paths == 0) throw Error(ErrorCode::Usage, "--paths must be >= 1");
}

std::string histogram_csv(const std::vector<stats::HistogramBin>& bins) {
    std::string out = "bin_low,bin_high,count\n";
    for (const auto& b : bins) {
        out += fmt::format("{},{},{}\n", io::format_significant(b.low, 10),
                           io::format_significant(b.high, 10), b.count);
    }
    return out;
}

int cmd_diagnose(const Options& o) {
    const auto series = load_inputs(o.inputs);
    const auto start = month_or(o.train_start, series.start());
    const auto end = month_or(o.train_end, series.end());
    const auto window = data::slice_window(series, start, end);
    auto prior = o.prior_rate;
    if (!prior) prior = series.rate_at(start.plus_months(-1));

    const auto vol = stats::volatility_profile(window, prior);
    const auto growth = stats::annual_growth_rate(window);
    const auto season = stats::season_profile(window);
    const auto dist = stats::distribution_diagnostics(window);

    std::string csv = "statistic,value\n";
    const auto row = [&csv](const std::string& name, double v) {
        csv += fmt::format("{},{}\n", name, io::format_significant(v, 10));
    };
    for (std::size_t i = 0; i < vol.years.size(); ++i) row(fmt::format("vol_{}", vol.years[i]), vol.yearly_vols[i]);
    for (std::size_t i = 0; i < vol.yearly_vol_logdiffs.size(); ++i) {
        row(fmt::format("vol_logdiff_{}", vol.years[i + 1]), vol.yearly_vol_logdiffs[i]);
    }
    row("window_vol", vol.window_vol);
    row("vol_of_vol", vol.vol_of_vol);
    row("growth", growth.annual_growth);
    for (int m = 1; m <= 12; ++m) {
        row(fmt::format("season_mean_{:02}", m), season.mean[static_cast<std::size_t>(m - 1)]);
        row(fmt::format("season_std_{:02}", m), season.stddev[static_cast<std::size_t>(m - 1)]);
    }
    if (vol.years.size() >= 3) row("rate_vol_correlation", stats::rate_vol_correlation(window, prior));
    row("logdiff_jb", dist.logdiff_normality.statistic);
    row("logdiff_jb_p", dist.logdiff_normality.p_value);
    row("log_rate_jb", dist.log_rate_normality.statistic);
    row("log_rate_jb_p", dist.log_rate_normality.p_value);
    std::string spikes;
    for (int m : stats::detect_spike_months(season, o.spike_threshold)) {
        spikes += (spikes.empty() ? "" : ";") + std::to_string(m);
    }
    csv += fmt::format("spike_months,{}\n", spikes);

    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    io::write_text_file(dir / "statistics.csv", csv);
    io::write_text_file(dir / "histogram_rates.csv", histogram_csv(dist.rate_histogram));
    io::write_text_file(dir / "histogram_logdiffs.csv", histogram_csv(dist.logdiff_histogram));
    std::cout << csv;
    return 0;
}

int cmd_fit(const Options& o) {
    if (o.out.empty()) throw Error(ErrorCode::Usage, "fit needs --out");
    const auto series = load_inputs(o.inputs);
    const auto config = model_config(o);
    const auto start = month_or(o.train_start, series.start());
    const auto end = month_or(o.train_end, series.end());
    const auto params = eval::fit_model(series, start, end, config);
    params.write(o.out);
    std::cout << params.to_string();
    return 0;
}

int cmd_forecast(const Options& o) {
    if (o.params.empty() || o.out.empty()) throw Error(ErrorCode::Usage, "forecast needs --params and --out");
    if (o.horizon == 0) throw Error(ErrorCode::Usage, "--horizon must be >= 1");
    require_paths(o);
    const auto seed = require_seed(o);
    const auto levels = parse_percent_list(o.levels, "--levels");
    const auto params = io::KeyValueFile::read(o.params);
    const auto forecast = eval::forecast_model(params, o.horizon, o.paths, seed, levels, o.threads);
    io::write_text_file(o.out, sim::forecast_to_csv(forecast));
    return 0;
}

fs::path coverage_path(const fs::path& report) {
    auto p = report;
    p.replace_filename(report.stem().string() + "_coverage.csv");
    return p;
}

int cmd_evaluate(const Options& o) {
    if (o.forecast.empty() || o.out.empty()) throw Error(ErrorCode::Usage, "evaluate needs --forecast and --out");
    const auto forecast = sim::forecast_from_csv(io::read_text_file(o.forecast), o.forecast);
    const auto observed_all = load_inputs(o.inputs);
    const auto f_end = forecast.start.plus_months(static_cast<int>(forecast.horizon()) - 1);
    if (!observed_all.contains(forecast.start) || !observed_all.contains(f_end)) {
        throw Error(ErrorCode::Alignment,
                    fmt::format("forecast covers {}..{} but observed covers {}..{}", forecast.start.str(),
                                f_end.str(), observed_all.start().str(), observed_all.end().str()));
    }
    const auto observed = eval::dated_rates(data::slice_window(observed_all, forecast.start, f_end));
    const auto report = eval::yearly_error_report({forecast.start, forecast.median}, observed,
                                                  o.model_id.empty() ? "forecast" : o.model_id);
    io::write_text_file(o.out, eval::report_to_csv(report));
    std::cout << eval::report_to_csv(report);

    const auto band = parse_percent_list(o.band, "--band");
    if (band.size() != 2) throw Error(ErrorCode::Usage, "--band takes two percentages, e.g. 25,75");
    const auto coverage = eval::interval_coverage(forecast, observed, band[0], band[1]);
    const auto text = eval::coverage_to_csv(band[0], band[1], coverage, observed.values.size());
    io::write_text_file(coverage_path(o.out), text);
    std::cout << text;
    return 0;
}

int cmd_backtest(const Options& o) {
    if (o.out.empty()) throw Error(ErrorCode::Usage, "backtest needs --out DIR");
    if (o.train_start.empty() || o.train_end.empty() || o.test_start.empty() || o.test_end.empty()) {
        throw Error(ErrorCode::Usage, "backtest needs --train-start, --train-end, --test-start and --test-end");
    }
    require_paths(o);
    const auto seed = require_seed(o);
    const auto series = load_inputs(o.inputs);
    const auto config = model_config(o);
    const auto result = eval::backtest(series, data::YearMonth::parse(o.train_start),
                                       data::YearMonth::parse(o.train_end),
                                       data::YearMonth::parse(o.test_start),
                                       data::YearMonth::parse(o.test_end), config, seed);
    const fs::path dir(o.out);
    result.parameters.write(dir / "params.txt");
    io::write_text_file(dir / "forecast.csv", sim::forecast_to_csv(result.forecast));
    const auto report = eval::report_to_csv(result.report);
    io::write_text_file(dir / "report.csv", report);
    std::cout << report;

    const auto band = parse_percent_list(o.band, "--band");
    if (band.size() != 2) throw Error(ErrorCode::Usage, "--band takes two percentages, e.g. 25,75");
    const auto observed = eval::dated_rates(data::slice_window(
        series, data::YearMonth::parse(o.test_start), data::YearMonth::parse(o.test_end)));
    const auto coverage = eval::interval_coverage(result.forecast, observed, band[0], band[1]);
    const auto text = eval::coverage_to_csv(band[0], band[1], coverage, observed.values.size());
    io::write_text_file(dir / "coverage.csv", text);
    std::cout << text;
    return 0;
}

int fail(ErrorCode code, const std::string& message) {
    std::cerr << "error[" << error_tag(code) << "]: " << message << '\n';
    return code == ErrorCode::Usage ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Crash-rate volatility diagnostics, stochastic forecasting and backtesting"};
    app.require_subcommand(1);

    const auto add_input = [&](CLI::App* c) {
        c->add_option("--input", o.inputs, "Monthly CSV (year,month,crashes,vmt_thousands); repeatable");
    };
    const auto add_train = [&](CLI::App* c) {
        c->add_option("--train-start", o.train_start, "First training month YYYY-MM");
        c->add_option("--train-end", o.train_end, "Last training month YYYY-MM");
        c->add_option("--prior-rate", o.prior_rate, "Rate of the month before --train-start");
    };
    const auto add_model = [&](CLI::App* c) {
        c->add_option("--model", o.model, "heston|vasicek|arima|arima-garch")->capture_default_str();
        c->add_option("--orders", o.orders, "p,d,q[,garch_p,garch_q]");
        c->add_option("--scheme", o.scheme, "reflect|truncate")->capture_default_str();
        c->add_option("--rho", o.rho, "Rate/variance correlation (default -0.5936)");
        c->add_option("--c1", o.c1, "Starting rate override");
        c->add_option("--spike-threshold", o.spike_threshold, "Minimum |mean deviation| for a spike month")
            ->capture_default_str();
        c->add_option("--set", o.sets, "Parameter override key=value; repeatable");
        c->add_flag("--log-levels", o.log_levels, "Fit ARIMA models to log rates");
    };
    const auto add_sim = [&](CLI::App* c) {
        c->add_option("--paths", o.paths, "Monte Carlo paths")->capture_default_str();
        c->add_option("--seed", o.seed, "Master seed");
        c->add_option("--levels", o.levels, "Quantile levels in percent")->capture_default_str();
        c->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    };

    auto* diagnose = app.add_subcommand("diagnose", "Volatility, growth, seasonality and distribution statistics");
    add_input(diagnose);
    add_train(diagnose);
    diagnose->add_option("--spike-threshold", o.spike_threshold)->capture_default_str();
    diagnose->add_option("--out", o.out, "Output directory")->capture_default_str();

    auto* fit = app.add_subcommand("fit", "Fit a model on a training window and write its parameter file");
    add_input(fit);
    add_train(fit);
    add_model(fit);
    fit->add_option("--out", o.out, "Parameter file to write");

    auto* forecast = app.add_subcommand("forecast", "Forecast quantiles from a parameter file");
    forecast->add_option("--params", o.params, "Parameter file from `fit`");
    forecast->add_option("--horizon", o.horizon, "Months to forecast")->capture_default_str();
    add_sim(forecast);
    forecast->add_option("--out", o.out, "Forecast CSV to write");

    auto* evaluate = app.add_subcommand("evaluate", "Score a forecast CSV against observed data");
    evaluate->add_option("--forecast", o.forecast, "Forecast CSV from `forecast`");
    add_input(evaluate);
    evaluate->add_option("--model-id", o.model_id, "Model label for the report");
    evaluate->add_option("--band", o.band, "Interval for coverage, in percent")->capture_default_str();
    evaluate->add_option("--out", o.out, "Report CSV to write");

    auto* bt = app.add_subcommand("backtest", "Fit, forecast and score over train/test windows");
    add_input(bt);
    add_train(bt);
    bt->add_option("--test-start", o.test_start, "First test month YYYY-MM");
    bt->add_option("--test-end", o.test_end, "Last test month YYYY-MM");
    add_model(bt);
    add_sim(bt);
    bt->add_option("--params", o.params, "Use this parameter file instead of fitting");
    bt->add_option("--band", o.band, "Interval for coverage, in percent")->capture_default_str();
    bt->add_option("--out", o.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(ErrorCode::Usage, e.what());
    }

    try {
        if (*diagnose) return cmd_diagnose(o);
        if (*fit) return cmd_fit(o);
        if (*forecast) return cmd_forecast(o);
        if (*evaluate) return cmd_evaluate(o);
        return cmd_backtest(o);
    } catch (const Error& e) {
        return fail(e.code(), e.what());
    } catch (const std::exception& e) {
        return fail(ErrorCode::Io, e.what());
    }
}
