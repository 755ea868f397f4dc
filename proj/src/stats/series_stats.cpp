#include "crashvol/stats/series_stats.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/log.hpp"

namespace crashvol::stats {

namespace {

double mean_of(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

// Complete calendar years covered by the series, with the index of each January.
struct YearSpan {
    int year;
    std::size_t january_index;
};

std::vector<YearSpan> complete_years(const data::MonthlySeries& series) {
    std::vector<YearSpan> years;
    if (series.empty()) return years;
    for (int y = series.start().year; y <= series.end().year; ++y) {
        const auto jan = series.index_of({y, 1});
        if (jan && series.contains({y, 12})) years.push_back({y, *jan});
    }
    return years;
}

}  // namespace

std::vector<double> log_differences(std::span<const double> rates) {
    if (rates.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "log-differences need at least two rates");
    }
    std::vector<double> out;
    out.reserve(rates.size() - 1);
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (!(rates[i] > 0.0)) {
            throw Error(ErrorCode::Domain,
                        fmt::format("log-difference of nonpositive rate {} at index {}",
                                    rates[i], i));
        }
        if (i > 0) out.push_back(std::log(rates[i] / rates[i - 1]));
    }
    return out;
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "standard deviation needs at least two values");
    }
    const double m = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double annualized_volatility(std::span<const double> logdiffs) {
    return sample_stddev(logdiffs) * std::sqrt(12.0);
}

VolatilityProfile volatility_profile(const data::MonthlySeries& series,
                                     std::optional<double> prior_rate) {
    const auto years = complete_years(series);
    if (years.size() < 2) {
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("volatility profile needs two complete calendar years, found {}",
                                years.size()));
    }
    const auto rates = series.rates();
    const std::size_t first = years.front().january_index;
    std::optional<double> prior = first > 0 ? std::optional<double>(rates[first - 1]) : prior_rate;
    if (prior && !(*prior > 0.0)) {
        throw Error(ErrorCode::Domain, "prior rate must be positive");
    }

    VolatilityProfile profile;
    profile.has_prior = prior.has_value();
    std::vector<double> window;
    for (std::size_t y = 0; y < years.size(); ++y) {
        const std::size_t jan = years[y].january_index;
        std::vector<double> chunk;
        if (jan > 0) {
            chunk.push_back(rates[jan - 1]);
        } else if (prior) {
            chunk.push_back(*prior);
        }
        chunk.insert(chunk.end(), rates.begin() + static_cast<std::ptrdiff_t>(jan),
                     rates.begin() + static_cast<std::ptrdiff_t>(jan + 12));
        const auto diffs = log_differences(chunk);
        profile.years.push_back(years[y].year);
        profile.yearly_vols.push_back(annualized_volatility(diffs));
        window.insert(window.end(), diffs.begin(), diffs.end());
    }
    profile.window_vol = annualized_volatility(window);

    for (std::size_t y = 0; y < profile.yearly_vols.size(); ++y) {
        if (!(profile.yearly_vols[y] > 0.0)) {
            throw Error(ErrorCode::DegenerateVariance,
                        fmt::format("calendar year {} has zero volatility", profile.years[y]));
        }
    }
    profile.yearly_vol_logdiffs = log_differences(profile.yearly_vols);
    if (profile.yearly_vol_logdiffs.size() >= 2) {
        profile.vol_of_vol = sample_stddev(profile.yearly_vol_logdiffs);
    } else {
        logger().warn("vol-of-vol needs three complete years; reporting 0");
        profile.vol_of_vol = 0.0;
    }
    return profile;
}

std::vector<double> yearly_mean_rates(const data::MonthlySeries& series,
                                      std::vector<int>* years_out) {
    const auto years = complete_years(series);
    const auto rates = series.rates();
    std::vector<double> means;
    for (const auto& y : years) {
        means.push_back(mean_of(rates.subspan(y.january_index, 12)));
        if (years_out) years_out->push_back(y.year);
    }
    return means;
}

GrowthEstimate annual_growth_rate(const data::MonthlySeries& series) {
    const auto means = yearly_mean_rates(series);
    if (means.size() < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "growth estimate needs two complete calendar years");
    }
    double log_sum = 0.0;
    for (std::size_t i = 1; i < means.size(); ++i) {
        if (!(means[i - 1] > 0.0) || !(means[i] > 0.0)) {
            throw Error(ErrorCode::Domain, "growth estimate needs positive yearly mean rates");
        }
        log_sum += std::log(means[i] / means[i - 1]);
    }
    return {std::exp(log_sum / static_cast<double>(means.size() - 1)) - 1.0,
            kGrowthMethodGeometric};
}

SeasonProfile season_profile(const data::MonthlySeries& series) {
    const auto years = complete_years(series);
    if (years.empty()) {
        throw Error(ErrorCode::InsufficientData, "season profile needs a complete calendar year");
    }
    const auto rates = series.rates();
    SeasonProfile profile;
    for (const auto& y : years) {
        const auto year_rates = rates.subspan(y.january_index, 12);
        const double avg = mean_of(year_rates);
        if (!(avg > 0.0)) {
            throw Error(ErrorCode::Domain,
                        fmt::format("calendar year {} has a zero mean rate", y.year));
        }
        std::array<double, 12> dev{};
        for (std::size_t m = 0; m < 12; ++m) dev[m] = year_rates[m] / avg - 1.0;
        profile.years.push_back(y.year);
        profile.deviations.push_back(dev);
    }
    for (std::size_t m = 0; m < 12; ++m) {
        std::vector<double> column;
        for (const auto& dev : profile.deviations) column.push_back(dev[m]);
        profile.mean[m] = mean_of(column);
        profile.stddev[m] = column.size() >= 2 ? sample_stddev(column) : 0.0;
    }
    return profile;
}

std::vector<int> detect_spike_months(const SeasonProfile& profile, double threshold) {
    if (!(threshold > 0.0)) {
        throw Error(ErrorCode::Domain, "spike threshold must be positive");
    }
    std::vector<int> months;
    for (std::size_t m = 0; m < 12; ++m) {
        if (std::abs(profile.mean[m]) < threshold) continue;
        const bool up = profile.mean[m] > 0.0;
        bool consistent = !profile.deviations.empty();
        for (const auto& dev : profile.deviations) {
            if (up ? !(dev[m] > 0.0) : !(dev[m] < 0.0)) {
                consistent = false;
                break;
            }
        }
        if (consistent) months.push_back(static_cast<int>(m) + 1);
    }
    return months;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "correlation needs two equal-length samples");
    }
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorCode::DegenerateVariance, "correlation of a constant sample");
    }
    return sxy / std::sqrt(sxx * syy);
}

double rate_vol_correlation(const data::MonthlySeries& series, std::optional<double> prior_rate) {
    const auto means = yearly_mean_rates(series);
    if (means.size() < 3) {
        throw Error(ErrorCode::InsufficientData,
                    "rate/volatility correlation needs three complete calendar years");
    }
    const auto profile = volatility_profile(series, prior_rate);
    return pearson(means, profile.yearly_vols);
}

}  // namespace crashvol::stats
