#include "crashvol/eval/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "crashvol/error.hpp"

namespace crashvol::eval {

namespace {

void require_aligned(data::YearMonth fs, std::size_t fn, data::YearMonth os, std::size_t on) {
    if (fs == os && fn == on && fn > 0) return;
    const auto range = [](data::YearMonth s, std::size_t n) {
        return n == 0 ? std::string("empty")
                      : fmt::format("{}..{}", s.str(), s.plus_months(static_cast<int>(n) - 1).str());
    };
    throw Error(ErrorCode::Alignment, fmt::format("forecast covers {} but observed covers {}",
                                                  range(fs, fn), range(os, on)));
}

}  // namespace

ErrorStats error_stats(std::span<const double> forecast, std::span<const double> observed) {
    if (forecast.size() != observed.size() || forecast.empty()) {
        throw Error(ErrorCode::Alignment,
                    fmt::format("error statistics need equal nonempty lengths, got {} and {}",
                                forecast.size(), observed.size()));
    }
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double pct_sum = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        if (!(observed[i] > 0.0)) {
            throw Error(ErrorCode::Domain,
                        fmt::format("MAPE undefined: observed value {} at index {}", observed[i], i));
        }
        const double err = std::abs(forecast[i] - observed[i]);
        abs_sum += err;
        sq_sum += err * err;
        pct_sum += err / observed[i];
    }
    const auto n = static_cast<double>(forecast.size());
    return {abs_sum / n, std::sqrt(sq_sum / n), pct_sum / n};
}

DatedSeries dated_rates(const data::MonthlySeries& series) {
    const auto r = series.rates();
    return {series.start(), {r.begin(), r.end()}};
}

ErrorReport yearly_error_report(const DatedSeries& forecast, const DatedSeries& observed,
                                std::string model_id) {
    require_aligned(forecast.start, forecast.values.size(), observed.start, observed.values.size());
    ErrorReport report;
    report.model_id = std::move(model_id);
    report.n_months = observed.values.size();
    std::size_t i = 0;
    while (i < observed.values.size()) {
        const int year = forecast.start.plus_months(static_cast<int>(i)).year;
        std::size_t j = i;
        while (j < observed.values.size() &&
               forecast.start.plus_months(static_cast<int>(j)).year == year) {
            ++j;
        }
        const auto f = std::span(forecast.values).subspan(i, j - i);
        const auto o = std::span(observed.values).subspan(i, j - i);
        report.per_year.push_back({year, error_stats(f, o), j - i});
        i = j;
    }
    const auto years = static_cast<double>(report.per_year.size());
    for (const auto& y : report.per_year) {
        report.overall.mae += y.stats.mae / years;
        report.overall.rmse += y.stats.rmse / years;
        report.overall.mape += y.stats.mape / years;
    }
    return report;
}

Coverage interval_coverage(const sim::ForecastQuantiles& quantiles, const DatedSeries& observed,
                           double low, double high) {
    if (!(low < high)) {
        throw Error(ErrorCode::Validation,
                    fmt::format("coverage band needs low < high, got {} and {}", low, high));
    }
    require_aligned(quantiles.start, quantiles.horizon(), observed.start, observed.values.size());
    const auto lo = quantiles.band(low);
    const auto hi = quantiles.band(high);
    Coverage c;
    for (std::size_t t = 0; t < observed.values.size(); ++t) {
        if (observed.values[t] < lo[t] || observed.values[t] > hi[t]) ++c.outside;
    }
    c.fraction = static_cast<double>(c.outside) / static_cast<double>(observed.values.size());
    return c;
}

}  // namespace crashvol::eval
