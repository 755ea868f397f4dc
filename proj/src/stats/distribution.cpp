#include "crashvol/stats/distribution.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/stats/series_stats.hpp"

namespace crashvol::stats {

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty()) {
        throw Error(ErrorCode::InsufficientData, "histogram of an empty sample");
    }
    if (bins == 0) {
        bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(values.size())))) + 1;
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (hi == lo) {
        return {HistogramBin{lo, hi, values.size()}};
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].low = lo + width * static_cast<double>(b);
        out[b].high = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        out[std::min(b, bins - 1)].count += 1;
    }
    return out;
}

JarqueBera jarque_bera(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3) {
        throw Error(ErrorCode::InsufficientData, "Jarque-Bera needs at least three values");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (!(m2 > 1e-300) || m2 <= 1e-24 * (mean * mean)) {
        throw Error(ErrorCode::DegenerateVariance, "Jarque-Bera on a constant sample");
    }
    JarqueBera jb;
    jb.skewness = m3 / std::pow(m2, 1.5);
    jb.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    jb.statistic = static_cast<double>(n) / 6.0 *
                   (jb.skewness * jb.skewness + 0.25 * jb.excess_kurtosis * jb.excess_kurtosis);
    jb.p_value = std::exp(-0.5 * jb.statistic);
    return jb;
}

DistributionDiagnostics distribution_diagnostics(const data::MonthlySeries& series) {
    if (series.size() < 24) {
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("distribution diagnostics need 24 observations, found {}",
                                series.size()));
    }
    const auto rates = series.rates();
    const auto diffs = log_differences(rates);
    std::vector<double> log_rates;
    log_rates.reserve(rates.size());
    for (double r : rates) log_rates.push_back(std::log(r));

    DistributionDiagnostics diag;
    diag.rate_histogram = histogram(rates);
    diag.logdiff_histogram = histogram(diffs);
    diag.logdiff_normality = jarque_bera(diffs);
    diag.log_rate_normality = jarque_bera(log_rates);
    return diag;
}

}  // namespace crashvol::stats
