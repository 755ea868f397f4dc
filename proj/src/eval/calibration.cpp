#include "crashvol/eval/calibration.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/log.hpp"
#include "crashvol/sim/vasicek.hpp"

namespace crashvol::eval {

WindowStatistics window_statistics(const data::MonthlySeries& series, data::YearMonth train_start,
                                   data::YearMonth train_end, const CalibrationOptions& options) {
    if (train_end < train_start) {
        throw Error(ErrorCode::Range, fmt::format("train window {}..{} is empty", train_start.str(),
                                                  train_end.str()));
    }
    const auto train = data::slice_window(series, train_start, train_end);
    WindowStatistics w;

    auto prior = options.prior_rate;
    if (!prior) prior = series.rate_at(train_start.plus_months(-1));
    w.volatility = stats::volatility_profile(train, prior);
    w.growth = stats::annual_growth_rate(train);
    w.season = stats::season_profile(train);
    w.spike_months = stats::detect_spike_months(w.season, options.spike_threshold);
    for (int m : w.spike_months) {
        w.spikes.push_back({m, w.season.mean[static_cast<std::size_t>(m - 1)],
                            w.season.stddev[static_cast<std::size_t>(m - 1)]});
    }

    const auto first_forecast = train_end.plus_months(1);
    if (options.c1) {
        w.c1 = *options.c1;
        w.c1_source = "override";
    } else if (const auto r = series.rate_at(first_forecast)) {
        w.c1 = *r;
        w.c1_source = "observed " + first_forecast.str();
    } else {
        w.c1 = train.rates().back();
        w.c1_source = "last training month";
    }
    const auto rates = train.rates();
    const std::size_t keep = std::min<std::size_t>(12, rates.size());
    w.history_tail.assign(rates.end() - static_cast<std::ptrdiff_t>(keep), rates.end());
    logger().info("train {}..{}: window vol {:.4f}, vol-of-vol {:.4f}, growth {:.4f}, C1 {:.6g} ({})",
                  train_start.str(), train_end.str(), w.volatility.window_vol,
                  w.volatility.vol_of_vol, w.growth.annual_growth, w.c1, w.c1_source);
    return w;
}

sim::StochasticModel calibrate_heston(const data::MonthlySeries& series,
                                      data::YearMonth train_start, data::YearMonth train_end,
                                      const CalibrationOptions& options) {
    const auto w = window_statistics(series, train_start, train_end, options);
    sim::HestonParams h;
    h.c1 = w.c1;
    h.mu = w.growth.annual_growth;
    h.v0 = w.volatility.window_vol * w.volatility.window_vol;
    h.theta = h.v0;
    h.xi = w.volatility.vol_of_vol;
    h.kappa = sim::feller_bound(h.xi, w.volatility.window_vol) * (1.0 + kFellerMargin);
    h.rho = options.rho;
    h.spikes = w.spikes;
    h.start = train_end.plus_months(1);
    h.scheme = options.scheme;
    h.validate();
    return {h, w.history_tail};
}

double ar1_slope(std::span<const double> values) {
    if (values.size() < 3) {
        throw Error(ErrorCode::InsufficientData, "AR(1) slope needs at least 3 values");
    }
    const auto n = static_cast<double>(values.size() - 1);
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t t = 1; t < values.size(); ++t) {
        mx += values[t - 1] / n;
        my += values[t] / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 1; t < values.size(); ++t) {
        sxy += (values[t - 1] - mx) * (values[t] - my);
        sxx += (values[t - 1] - mx) * (values[t - 1] - mx);
    }
    if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateVariance, "AR(1) slope of a constant series");
    return sxy / sxx;
}

sim::StochasticModel calibrate_vasicek(const data::MonthlySeries& series,
                                       data::YearMonth train_start, data::YearMonth train_end,
                                       const CalibrationOptions& options) {
    const auto w = window_statistics(series, train_start, train_end, options);
    const auto train = data::slice_window(series, train_start, train_end);
    sim::VasicekParams v;
    v.c1 = w.c1;
    v.mu = w.growth.annual_growth;
    v.kappa = sim::vasicek_kappa_from_ar1(ar1_slope(train.rates()));
    v.sigma = w.volatility.window_vol;
    v.spikes = w.spikes;
    v.start = train_end.plus_months(1);
    v.scheme = options.scheme;
    v.validate();
    return {v, w.history_tail};
}

}  // namespace crashvol::eval
