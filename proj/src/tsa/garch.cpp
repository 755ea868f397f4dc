#include "crashvol/tsa/garch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/log.hpp"

namespace crashvol::tsa {

namespace {

constexpr double kMaxLogit = 25.0;
// Log-likelihood gap below which two starts count as tied: half a nat, well
// under the 1.92 a single extra parameter needs at the 5% level.
constexpr double kLikelihoodTie = 0.5;

double mean_square(std::span<const double> e) {
    double s = 0.0;
    for (double v : e) s += v * v;
    return s / static_cast<double>(e.size());
}

// x = [ln omega, logits for alpha..., beta...]; the slack logit is fixed at 0.
GarchSpec unpack(std::span<const double> x, int p, int q) {
    GarchSpec g;
    g.p = p;
    g.q = q;
    g.omega = std::exp(x[0]);
    const std::size_t k = static_cast<std::size_t>(p + q);
    // Bounded logits keep the slack weight representable, so persistence < 1.
    const auto logit = [&](std::size_t i) { return std::clamp(x[1 + i], -kMaxLogit, kMaxLogit); };
    double top = 0.0;
    for (std::size_t i = 0; i < k; ++i) top = std::max(top, logit(i));
    double denom = std::exp(-top);
    for (std::size_t i = 0; i < k; ++i) denom += std::exp(logit(i) - top);
    for (std::size_t i = 0; i < k; ++i) {
        const double w = std::exp(logit(i) - top) / denom;
        (i < static_cast<std::size_t>(p) ? g.alpha : g.beta).push_back(w);
    }
    return g;
}

}  // namespace

double GarchSpec::persistence() const noexcept {
    return std::accumulate(alpha.begin(), alpha.end(), 0.0) +
           std::accumulate(beta.begin(), beta.end(), 0.0);
}

void GarchSpec::validate() const {
    if (p < 0 || q < 0) throw Error(ErrorCode::Validation, "GARCH orders must be nonnegative");
    if (alpha.size() != static_cast<std::size_t>(p) || beta.size() != static_cast<std::size_t>(q)) {
        throw Error(ErrorCode::Validation,
                    fmt::format("GARCH({},{}) has {} ARCH and {} GARCH weights", p, q,
                                alpha.size(), beta.size()));
    }
    if (!(omega > 0.0)) throw Error(ErrorCode::Validation, "GARCH omega must be > 0");
    for (double w : alpha) {
        if (!(w >= 0.0)) throw Error(ErrorCode::Validation, "GARCH alpha must be >= 0");
    }
    for (double w : beta) {
        if (!(w >= 0.0)) throw Error(ErrorCode::Validation, "GARCH beta must be >= 0");
    }
    if (!(persistence() < 1.0)) {
        throw Error(ErrorCode::Validation,
                    fmt::format("GARCH persistence {} is not below 1", persistence()));
    }
}

std::vector<double> garch_variance_path(const GarchSpec& spec, std::span<const double> residuals) {
    if (residuals.empty()) return {};
    const double backcast = mean_square(residuals);
    std::vector<double> h(residuals.size());
    for (std::size_t t = 0; t < residuals.size(); ++t) {
        double v = spec.omega;
        for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
            const double e2 = t > i ? residuals[t - 1 - i] * residuals[t - 1 - i] : backcast;
            v += spec.alpha[i] * e2;
        }
        for (std::size_t j = 0; j < spec.beta.size(); ++j) {
            v += spec.beta[j] * (t > j ? h[t - 1 - j] : backcast);
        }
        h[t] = v;
    }
    return h;
}

double garch_log_likelihood(const GarchSpec& spec, std::span<const double> residuals) {
    const auto h = garch_variance_path(spec, residuals);
    double ll = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) {
        ll -= 0.5 * (std::log(2.0 * std::numbers::pi) + std::log(h[t]) +
                     residuals[t] * residuals[t] / h[t]);
    }
    return ll;
}

GarchSpec fit_garch(std::span<const double> residuals, int p, int q,
                    const optim::NelderMeadOptions& optimizer) {
    if (p < 0 || q < 0 || p + q == 0) {
        throw Error(ErrorCode::Validation,
                    fmt::format("GARCH orders ({},{}) need p, q >= 0 and p + q >= 1", p, q));
    }
    if (residuals.size() < static_cast<std::size_t>(p + q + 2)) {
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("GARCH({},{}) needs at least {} residuals, got {}", p, q, p + q + 2,
                                residuals.size()));
    }
    if (residuals.size() < 50) {
        logger().info("GARCH fit on {} residuals is below the recommended 50", residuals.size());
    }
    const double m = std::accumulate(residuals.begin(), residuals.end(), 0.0) /
                     static_cast<double>(residuals.size());
    double spread = 0.0;
    for (double v : residuals) spread = std::max(spread, std::abs(v - m));
    const double ms = mean_square(residuals);
    if (!(spread > 1e-12 * std::max(1.0, std::abs(m))) || !(ms > 0.0)) {
        throw Error(ErrorCode::DegenerateVariance, "GARCH residuals have zero variance");
    }
    const double scale = std::sqrt(ms);
    std::vector<double> z(residuals.size());
    std::transform(residuals.begin(), residuals.end(), z.begin(),
                   [scale](double v) { return v / scale; });

    const auto objective = [&](std::span<const double> x) {
        const auto g = unpack(x, p, q);
        const auto h = garch_variance_path(g, z);
        double nll = 0.0;
        for (std::size_t t = 0; t < h.size(); ++t) nll += std::log(h[t]) + z[t] * z[t] / h[t];
        return 0.5 * nll;
    };

    // Two starts, persistence 0.9 and 0.1, each split 1:8 between ARCH and
    // GARCH terms. With no ARCH effect the likelihood is flat along the GARCH
    // weights, so near-ties resolve to the less persistent solution.
    const auto start = [&](double persistence) {
        const double a0 = p > 0 ? (q > 0 ? persistence / 9.0 : persistence) / p : 0.0;
        const double b0 = q > 0 ? (p > 0 ? persistence * 8.0 / 9.0 : persistence) / q : 0.0;
        const double slack = 1.0 - persistence;
        std::vector<double> x0{std::log(slack)};
        for (int i = 0; i < p; ++i) x0.push_back(std::log(a0 / slack));
        for (int j = 0; j < q; ++j) x0.push_back(std::log(b0 / slack));
        return optim::minimize(objective, x0, optimizer);
    };
    auto best = start(0.9);
    const auto low = start(0.1);
    if (low.converged && (!best.converged || low.value <= best.value + kLikelihoodTie)) best = low;

    auto spec = unpack(best.x, p, q);
    spec.omega *= ms;
    if (!best.converged) {
        std::vector<double> params{spec.omega};
        params.insert(params.end(), spec.alpha.begin(), spec.alpha.end());
        params.insert(params.end(), spec.beta.begin(), spec.beta.end());
        throw ConvergenceError(fmt::format("GARCH({},{}) did not converge", p, q),
                               std::move(params), best.value);
    }
    spec.log_likelihood = garch_log_likelihood(spec, residuals);
    spec.validate();
    return spec;
}

std::vector<double> forecast_garch_variance(const GarchSpec& spec, std::span<const double> residuals,
                                            std::size_t horizon) {
    spec.validate();
    if (residuals.empty()) {
        throw Error(ErrorCode::InsufficientData, "GARCH variance forecast needs residuals");
    }
    const auto h = garch_variance_path(spec, residuals);
    std::vector<double> e2(residuals.size());
    std::transform(residuals.begin(), residuals.end(), e2.begin(), [](double v) { return v * v; });
    std::vector<double> hh = h;
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        const std::size_t t = hh.size();
        double v = spec.omega;
        for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
            v += spec.alpha[i] * (t > i ? e2[t - 1 - i] : e2.front());
        }
        for (std::size_t j = 0; j < spec.beta.size(); ++j) {
            v += spec.beta[j] * (t > j ? hh[t - 1 - j] : hh.front());
        }
        hh.push_back(v);
        e2.push_back(v);  // E[e²] = h beyond the sample
        out.push_back(v);
    }
    return out;
}

ArimaGarchForecast forecast_arima_garch(const ArimaSpec& arima, const GarchSpec& garch,
                                        std::span<const double> last_observations,
                                        std::size_t horizon) {
    ArimaGarchForecast out;
    out.mean = forecast_arima(arima, last_observations, horizon);
    std::vector<double> y(last_observations.begin(), last_observations.end());
    if (arima.log_levels) {
        for (double& v : y) v = std::log(v);
    }
    const auto w = difference(y, arima.d);
    const auto e = css_residuals(w, arima.ar, arima.ma, arima.has_intercept ? arima.intercept : 0.0);
    if (e.empty()) {
        out.variance.assign(horizon, garch.omega / std::max(1e-12, 1.0 - garch.persistence()));
    } else {
        out.variance = forecast_garch_variance(garch, e, horizon);
    }
    return out;
}

}  // namespace crashvol::tsa
