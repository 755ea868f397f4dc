#include "crashvol/sim/heston.hpp"

#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "crashvol/error.hpp"
#include "crashvol/log.hpp"
#include "crashvol/sim/rng.hpp"
#include "parallel.hpp"

namespace crashvol::sim {

bool HestonParams::feller_satisfied() const noexcept {
    if (theta <= 0.0) return false;
    return kappa > xi * xi / (2.0 * theta);
}

std::vector<std::string> HestonParams::violations() const {
    std::vector<std::string> out;
    const auto finite = [&](double x, const char* name) {
        if (!std::isfinite(x)) out.push_back(fmt::format("{} is not finite", name));
        return std::isfinite(x);
    };
    if (finite(c1, "c1") && !(c1 > 0.0)) out.push_back(fmt::format("c1 = {} must be > 0", c1));
    finite(mu, "mu");
    if (finite(v0, "v0") && v0 < 0.0) out.push_back(fmt::format("v0 = {} must be >= 0", v0));
    if (finite(theta, "theta") && theta < 0.0) {
        out.push_back(fmt::format("theta = {} must be >= 0", theta));
    }
    if (finite(kappa, "kappa") && kappa < 0.0) {
        out.push_back(fmt::format("kappa = {} must be >= 0", kappa));
    }
    if (finite(xi, "xi") && xi < 0.0) out.push_back(fmt::format("xi = {} must be >= 0", xi));
    if (finite(rho, "rho") && std::abs(rho) > 1.0) {
        out.push_back(fmt::format("rho = {} must lie in [-1, 1]", rho));
    }
    if (finite(dt, "dt") && !(dt > 0.0)) out.push_back(fmt::format("dt = {} must be > 0", dt));
    if (!start.valid()) out.push_back("start month outside 1..12");
    try {
        validate_spikes(spikes);
    } catch (const Error& e) {
        out.emplace_back(e.what());
    }
    return out;
}

void HestonParams::validate() const {
    const auto problems = violations();
    if (!problems.empty()) {
        throw Error(ErrorCode::Validation,
                    fmt::format("invalid Heston parameters: {}", fmt::join(problems, "; ")));
    }
    if (!feller_satisfied()) {
        logger().warn("Feller condition not met in variance units: kappa = {} <= xi^2/(2 theta) = {}", kappa,
                      theta > 0.0 ? xi * xi / (2.0 * theta) : INFINITY);
    }
}

double feller_bound(double xi, double theta_vol) {
    if (!(theta_vol > 0.0)) {
        throw Error(ErrorCode::Domain,
                    fmt::format("Feller bound needs theta_vol > 0, got {}", theta_vol));
    }
    return xi * xi / (2.0 * theta_vol);
}

double step_variance(double v, const HestonParams& params, double dt, double z_v) {
    const double raw = v + params.kappa * (params.theta - v) * dt +
                       params.xi * std::sqrt(v) * std::sqrt(dt) * z_v;
    return apply_scheme(raw, params.scheme);
}

double step_rate(double c_prev, const HestonParams& params, double v, double dt, double z_c) {
    const double raw = c_prev + params.mu * params.c1 * dt +
                       std::sqrt(v) * params.c1 * std::sqrt(dt) * z_c;
    return apply_scheme(raw, params.scheme);
}

SimulationResult simulate_heston(const HestonParams& params, std::size_t horizon,
                                 std::size_t n_paths, std::uint64_t seed,
                                 std::span<const double> history_tail,
                                 const SimulationOptions& options) {
    if (horizon == 0 || n_paths == 0) {
        throw Error(ErrorCode::Validation, "horizon and path count must both be >= 1");
    }
    params.validate();

    SimulationResult result;
    result.model = "heston";
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
    detail::for_each_path(n_paths, options.threads, [&](std::size_t p) {
        NormalStream normals(seed, p);
        auto base = result.base_rates.row(p);
        auto reported = result.rates.row(p);
        auto variance = result.variances.row(p);
        double c = params.c1;
        double v = params.v0;
        for (std::size_t t = 0; t < horizon; ++t) {
            const int month = params.start.plus_months(static_cast<int>(t)).month;
            const double z1 = normals.next();
            const double z2 = normals.next();
            const auto [z_c, z_v] = correlated_normal_pair(z1, z2, params.rho);
            const double c_next = step_rate(c, params, v, params.dt, z_c);
            const double v_next = step_variance(v, params, params.dt, z_v);
            base[t] = c_next;
            variance[t] = v_next;
            double spiked = c_next;
            if (is_spike_month(month, params.spikes)) {
                const double g = spike_adjustment(month, params.spikes, normals.next());
                const double avg = prevailing_year_average(base.first(t + 1), hist);
                spiked = apply_scheme(c_next + avg * g, params.scheme);
            }
            reported[t] = spiked;
            c = c_next;
            v = v_next;
        }
    });
    return result;
}

}  // namespace crashvol::sim
