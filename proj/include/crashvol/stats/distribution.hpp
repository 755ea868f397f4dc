#pragma once

#include <span>
#include <vector>

#include "crashvol/data/monthly_series.hpp"

namespace crashvol::stats {

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
};

/// Equal-width histogram over [min, max]; Sturges' rule when bins == 0.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins = 0);

struct JarqueBera {
    double statistic = 0.0;
    double p_value = 1.0;  // chi-square(2) upper tail
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Jarque–Bera normality test. Throws Error(DegenerateVariance) for a
/// constant sample and Error(InsufficientData) below 3 values.
JarqueBera jarque_bera(std::span<const double> values);

struct DistributionDiagnostics {
    std::vector<HistogramBin> rate_histogram;
    std::vector<HistogramBin> logdiff_histogram;
    JarqueBera logdiff_normality;
    JarqueBera log_rate_normality;  // lognormality check on the raw rates
};

/// Requires ≥ 24 observations.
DistributionDiagnostics distribution_diagnostics(const data::MonthlySeries& series);

}  // namespace crashvol::stats
