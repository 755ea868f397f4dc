#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crashvol/data/monthly_series.hpp"

namespace crashvol::stats {

/// ln(r[i+1] / r[i]) for each consecutive pair. Requires ≥ 2 positive rates.
std::vector<double> log_differences(std::span<const double> rates);

/// Sample standard deviation (n − 1 denominator). Requires ≥ 2 values.
double sample_stddev(std::span<const double> values);

/// Sample standard deviation of monthly log-differences scaled by √12.
double annualized_volatility(std::span<const double> logdiffs);

struct VolatilityProfile {
    std::vector<int> years;
    std::vector<double> yearly_vols;          // annualized, one per calendar year
    std::vector<double> yearly_vol_logdiffs;  // ln(vol[y+1] / vol[y])
    double window_vol = 0.0;                  // annualized over every log-difference
    double vol_of_vol = 0.0;                  // sample stddev of yearly_vol_logdiffs, not annualized
    bool has_prior = false;                   // first January carried a prior-December difference
};

/**
 * @brief Yearly and whole-window volatility of a monthly series.
 *
 * Only complete calendar years (January..December) inside the series are
 * used. A log-difference ln(r_t / r_{t-1}) is assigned to the calendar year
 * of t, so the first January needs the preceding December's rate. That rate
 * is taken from the series when present, otherwise from `prior_rate`; with
 * neither the first year contributes 11 differences.
 */
VolatilityProfile volatility_profile(const data::MonthlySeries& series,
                                     std::optional<double> prior_rate = std::nullopt);

struct GrowthEstimate {
    double annual_growth = 0.0;
    std::string method;
};

inline constexpr const char* kGrowthMethodGeometric = "geometric-mean-yoy-ratio";

/// Geometric mean of year-over-year ratios of calendar-year mean rates, minus 1.
GrowthEstimate annual_growth_rate(const data::MonthlySeries& series);

/**
 * @brief Per-month deviation of each rate from its own calendar-year mean.
 *
 * deviations[y][m] = r / mean(r over year y) − 1. `mean` and `stddev` summarize
 * each calendar month across years (stddev is the n − 1 sample estimate and
 * 0 when a single year is available).
 */
struct SeasonProfile {
    std::vector<int> years;
    std::vector<std::array<double, 12>> deviations;
    std::array<double, 12> mean{};
    std::array<double, 12> stddev{};
};

SeasonProfile season_profile(const data::MonthlySeries& series);

/// Months (1..12) with |mean deviation| ≥ threshold whose deviation has the
/// same strict sign in every year of the profile.
std::vector<int> detect_spike_months(const SeasonProfile& profile, double threshold);

/// Pearson correlation of per-year mean rates against per-year volatilities.
/// Requires ≥ 3 complete years.
double rate_vol_correlation(const data::MonthlySeries& series,
                            std::optional<double> prior_rate = std::nullopt);

/// Pearson correlation; throws Error(DegenerateVariance) if either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Mean of each complete calendar year's rates, aligned with `years_out`.
std::vector<double> yearly_mean_rates(const data::MonthlySeries& series,
                                      std::vector<int>* years_out = nullptr);

}  // namespace crashvol::stats
