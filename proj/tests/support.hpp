#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <span>
#include <vector>

#include "crashvol/data/monthly_series.hpp"
#include "crashvol/sim/heston.hpp"

namespace crashvol::testing {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(CRASHVOL_DATA_DIR) / name;
}

inline data::MonthlySeries table1() { return data::parse_monthly_csv(data_path("dc_2010_2014.csv")); }
inline data::MonthlySeries tableA1() { return data::parse_monthly_csv(data_path("dc_2015_2019.csv")); }

inline data::MonthlySeries both_tables() {
    const std::vector<data::MonthlySeries> parts{table1(), tableA1()};
    return data::merge_series(parts);
}

/// December 2009 rate implied by the printed January 2010 log-difference (-7.43%).
inline double december_2009_rate() { return 881.0 / 287000.0 * std::exp(0.0743); }

/// Reference model inputs for the 2015-2019 forecast.
inline sim::HestonParams reference_heston() {
    sim::HestonParams p;
    p.c1 = 0.00498;
    p.mu = 0.1361;
    p.v0 = 0.6333 * 0.6333;
    p.theta = p.v0;
    p.kappa = 0.0545;
    p.xi = 0.2626;
    p.rho = -0.5936;
    p.spikes = {{1, -0.173, 0.125}, {7, 0.334, 0.056}, {8, -0.121, 0.041}};
    p.start = {2015, 1};
    return p;
}

/// Observed 2014 rates, the history preceding the 2015 forecast start.
inline std::vector<double> history_2014() {
    const auto r = table1().rates();
    return {r.end() - 12, r.end()};
}

inline bool near(double actual, double expected, double tolerance) {
    return std::abs(actual - expected) <= tolerance;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Standard error of the sample mean.
inline double standard_error(const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

/// Owning copy of a span; series accessors return views into the series.
inline std::vector<double> to_vector(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace crashvol::testing
