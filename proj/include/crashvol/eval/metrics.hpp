#pragma once

#include <span>
#include <string>
#include <vector>

#include "crashvol/data/monthly_series.hpp"
#include "crashvol/data/year_month.hpp"
#include "crashvol/sim/quantiles.hpp"

namespace crashvol::eval {

/// MAE and RMSE in rate units; MAPE as a fraction (0.10 = 10%).
struct ErrorStats {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;
};

/// Throws Error(Alignment) on a length mismatch or empty input and
/// Error(Domain) when an observed value is not positive.
ErrorStats error_stats(std::span<const double> forecast, std::span<const double> observed);

/// Consecutive monthly values starting at `start`.
struct DatedSeries {
    data::YearMonth start;
    std::vector<double> values;

    [[nodiscard]] data::YearMonth end() const { return start.plus_months(static_cast<int>(values.size()) - 1); }
};

DatedSeries dated_rates(const data::MonthlySeries& series);

struct YearErrors {
    int year = 0;
    ErrorStats stats;
    std::size_t n_months = 0;
};

struct ErrorReport {
    std::string model_id;
    std::vector<YearErrors> per_year;
    ErrorStats overall;  // unweighted mean of the yearly values
    std::size_t n_months = 0;
};

/// Per-calendar-year errors. Both series must cover exactly the same months;
/// otherwise Error(Alignment) names the offending ranges.
ErrorReport yearly_error_report(const DatedSeries& forecast, const DatedSeries& observed,
                                std::string model_id);

struct Coverage {
    std::size_t outside = 0;
    double fraction = 0.0;
};

/// Observed months strictly outside [band(low), band(high)].
Coverage interval_coverage(const sim::ForecastQuantiles& quantiles, const DatedSeries& observed,
                           double low, double high);

}  // namespace crashvol::eval
