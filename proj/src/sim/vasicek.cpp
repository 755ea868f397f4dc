#include "crashvol/sim/vasicek.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "crashvol/error.hpp"
#include "crashvol/sim/rng.hpp"
#include "parallel.hpp"

namespace crashvol::sim {

std::vector<std::string> VasicekParams::violations() const {
    std::vector<std::string> out;
    if (!(c1 > 0.0) || !std::isfinite(c1)) out.push_back(fmt::format("c1 = {} must be > 0", c1));
    if (!std::isfinite(mu) || !(mu > -1.0)) out.push_back(fmt::format("mu = {} must be > -1", mu));
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        out.push_back(fmt::format("kappa = {} must be >= 0", kappa));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        out.push_back(fmt::format("sigma = {} must be >= 0", sigma));
    }
    if (!(dt > 0.0)) out.push_back(fmt::format("dt = {} must be > 0", dt));
    if (!start.valid()) out.push_back("start month outside 1..12");
    try {
        validate_spikes(spikes);
    } catch (const Error& e) {
        out.emplace_back(e.what());
    }
    return out;
}

void VasicekParams::validate() const {
    const auto problems = violations();
    if (!problems.empty()) {
        throw Error(ErrorCode::Validation,
                    fmt::format("invalid Vasicek parameters: {}", fmt::join(problems, "; ")));
    }
}

double VasicekParams::target(double years_elapsed) const noexcept {
    return c1 * std::pow(1.0 + mu, years_elapsed);
}

double vasicek_kappa_from_ar1(double slope) {
    if (!(slope > 0.0)) return 12.0;
    return std::clamp(-12.0 * std::log(slope), 0.0, 12.0);
}

SimulationResult simulate_vasicek(const VasicekParams& params, std::size_t horizon,
                                  std::size_t n_paths, std::uint64_t seed,
                                  std::span<const double> history_tail,
                                  const SimulationOptions& options) {
    if (horizon == 0 || n_paths == 0) {
        throw Error(ErrorCode::Validation, "horizon and path count must both be >= 1");
    }
    params.validate();

    SimulationResult result;
    result.model = "vasicek";
    result.rates = PathMatrix(n_paths, horizon);
    result.base_rates = PathMatrix(n_paths, horizon);
    result.variances = PathMatrix(n_paths, horizon);
    result.seed = seed;
    result.dt = params.dt;
    result.start = params.start;
    const std::size_t tail = std::min<std::size_t>(history_tail.size(), 12);
    result.history_tail.assign(history_tail.end() - static_cast<std::ptrdiff_t>(tail),
                               history_tail.end());

    const std::span<const double> hist = result.history_tail;
    const double variance = params.sigma * params.sigma;
    detail::for_each_path(n_paths, options.threads, [&](std::size_t p) {
        NormalStream normals(seed, p);
        auto base = result.base_rates.row(p);
        auto reported = result.rates.row(p);
        auto var_row = result.variances.row(p);
        double c = params.c1;
        for (std::size_t t = 0; t < horizon; ++t) {
            const int month = params.start.plus_months(static_cast<int>(t)).month;
            const double z = normals.next();
            const double goal = params.target(static_cast<double>(t) * params.dt);
            const double raw = c + params.kappa * (goal - c) * params.dt +
                               params.sigma * params.c1 * std::sqrt(params.dt) * z;
            const double c_next = apply_scheme(raw, params.scheme);
            base[t] = c_next;
            var_row[t] = variance;
            double spiked = c_next;
            if (is_spike_month(month, params.spikes)) {
                const double g = spike_adjustment(month, params.spikes, normals.next());
                const double avg = prevailing_year_average(base.first(t + 1), hist);
                spiked = apply_scheme(c_next + avg * g, params.scheme);
            }
            reported[t] = spiked;
            c = c_next;
        }
    });
    return result;
}

}  // namespace crashvol::sim
