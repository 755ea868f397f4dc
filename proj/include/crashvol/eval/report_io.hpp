#pragma once

#include <string>

#include "crashvol/eval/metrics.hpp"

namespace crashvol::eval {

/// CSV `model,year,mae,rmse,mape` with one row per year plus an `overall`
/// row. Values are rate fractions with 10 significant digits.
std::string report_to_csv(const ErrorReport& report);

/// Two-line CSV `low,high,outside,months,fraction`.
std::string coverage_to_csv(double low, double high, const Coverage& coverage, std::size_t months);

}  // namespace crashvol::eval
