#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace crashvol::sim {

/// How a negative Euler update is mapped back to the half-line.
enum class Scheme {
    Reflect,   // |x|
    Truncate,  // max(x, 0)
};

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view text);

inline double apply_scheme(double x, Scheme scheme) noexcept {
    if (x >= 0.0) return x;
    return scheme == Scheme::Reflect ? -x : 0.0;
}

/// Calendar-month hurdle: in `month` the rate is shifted by
/// prevailing_average × N(mean, stddev).
struct SpikeSpec {
    int month = 1;  // 1..12
    double mean = 0.0;
    double stddev = 0.0;

    friend bool operator==(const SpikeSpec&, const SpikeSpec&) = default;
};

/// (z1, rho·z1 + sqrt(1 − rho²)·z2). Throws Error(Domain) when |rho| > 1.
std::pair<double, double> correlated_normal_pair(double z1, double z2, double rho);

/// mean + stddev·z for the spec matching `month`, 0 when no spec matches.
double spike_adjustment(int month, std::span<const SpikeSpec> spikes, double z);

/// Whether any spec targets `month`.
bool is_spike_month(int month, std::span<const SpikeSpec> spikes) noexcept;

/**
 * @brief Trailing twelve-month mean of base (pre-spike) rates.
 *
 * Takes the most recent up-to-12 values of `path_so_far` and backfills from
 * the end of `history_tail` (observed rates before the forecast start) when
 * fewer than 12 simulated months exist.
 */
double prevailing_year_average(std::span<const double> path_so_far,
                               std::span<const double> history_tail);

/// Throws Error(Validation) listing each problem: month outside 1..12,
/// negative stddev, duplicate month.
void validate_spikes(std::span<const SpikeSpec> spikes);

}  // namespace crashvol::sim
