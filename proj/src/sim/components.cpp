#include "crashvol/sim/components.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "crashvol/error.hpp"

namespace crashvol::sim {

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::Reflect ? "reflect" : "truncate";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "reflect") return Scheme::Reflect;
    if (text == "truncate") return Scheme::Truncate;
    throw Error(ErrorCode::Parse, fmt::format("unknown scheme '{}' (reflect|truncate)", text));
}

std::pair<double, double> correlated_normal_pair(double z1, double z2, double rho) {
    if (!(std::abs(rho) <= 1.0)) {
        throw Error(ErrorCode::Domain, fmt::format("correlation {} outside [-1, 1]", rho));
    }
    return {z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2};
}

bool is_spike_month(int month, std::span<const SpikeSpec> spikes) noexcept {
    return std::any_of(spikes.begin(), spikes.end(),
                       [month](const SpikeSpec& s) { return s.month == month; });
}

double spike_adjustment(int month, std::span<const SpikeSpec> spikes, double z) {
    for (const auto& s : spikes) {
        if (s.month == month) return s.mean + s.stddev * z;
    }
    return 0.0;
}

double prevailing_year_average(std::span<const double> path_so_far,
                               std::span<const double> history_tail) {
    const std::size_t from_path = std::min<std::size_t>(path_so_far.size(), 12);
    const std::size_t from_history = std::min<std::size_t>(history_tail.size(), 12 - from_path);
    if (from_path + from_history == 0) {
        throw Error(ErrorCode::InsufficientData,
                    "prevailing average needs at least one simulated or observed rate");
    }
    double sum = 0.0;
    for (std::size_t i = path_so_far.size() - from_path; i < path_so_far.size(); ++i) {
        sum += path_so_far[i];
    }
    for (std::size_t i = history_tail.size() - from_history; i < history_tail.size(); ++i) {
        sum += history_tail[i];
    }
    return sum / static_cast<double>(from_path + from_history);
}

void validate_spikes(std::span<const SpikeSpec> spikes) {
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < spikes.size(); ++i) {
        const auto& s = spikes[i];
        if (s.month < 1 || s.month > 12) {
            problems.push_back(fmt::format("spike month {} outside 1..12", s.month));
        }
        if (!(s.stddev >= 0.0)) {
            problems.push_back(fmt::format("spike {} stddev {} is negative", s.month, s.stddev));
        }
        if (!std::isfinite(s.mean)) {
            problems.push_back(fmt::format("spike {} mean is not finite", s.month));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spikes[j].month == s.month) {
                problems.push_back(fmt::format("duplicate spike month {}", s.month));
            }
        }
    }
    if (!problems.empty()) {
        throw Error(ErrorCode::Validation,
                    fmt::format("invalid spikes: {}", fmt::join(problems, "; ")));
    }
}

}  // namespace crashvol::sim
