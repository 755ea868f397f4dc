#include "crashvol/tsa/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/log.hpp"
#include "crashvol/tsa/polynomial.hpp"

namespace crashvol::tsa {

namespace {

constexpr double kMaxPartial = 1.0 - 1e-8;

double bounded_tanh(double u) { return std::clamp(std::tanh(u), -kMaxPartial, kMaxPartial); }

double stddev_or_one(std::span<const double> w) {
    if (w.size() < 2) return 1.0;
    const double m = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double ss = 0.0;
    for (double v : w) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(w.size() - 1));
    return sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
}

struct Unpacked {
    double intercept = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
};

Unpacked unpack(std::span<const double> x, int p, int q, bool intercept) {
    Unpacked u;
    std::size_t k = 0;
    if (intercept) u.intercept = x[k++];
    std::vector<double> partials(static_cast<std::size_t>(p));
    for (auto& v : partials) v = bounded_tanh(x[k++]);
    u.ar = partials_to_ar(partials);
    partials.assign(static_cast<std::size_t>(q), 0.0);
    for (auto& v : partials) v = bounded_tanh(x[k++]);
    u.ma = partials_to_ar(partials);
    for (double& m : u.ma) m = -m;
    return u;
}

std::vector<double> to_working_scale(std::span<const double> series, bool log_levels) {
    std::vector<double> y(series.begin(), series.end());
    if (log_levels) {
        for (double& v : y) {
            if (!(v > 0.0)) throw Error(ErrorCode::Domain, "log-level ARIMA needs positive data");
            v = std::log(v);
        }
    }
    return y;
}

void check_orders(int p, int d, int q) {
    if (p < 0 || d < 0 || q < 0) {
        throw Error(ErrorCode::Validation,
                    fmt::format("ARIMA orders must be nonnegative, got ({},{},{})", p, d, q));
    }
}

}  // namespace

std::vector<double> difference(std::span<const double> series, int d) {
    if (d < 0) throw Error(ErrorCode::Validation, "differencing order must be >= 0");
    if (series.size() <= static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("cannot difference {} values {} times", series.size(), d));
    }
    std::vector<double> out(series.begin(), series.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

void ArimaSpec::validate() const {
    std::vector<std::string> problems;
    if (p < 0 || d < 0 || q < 0) problems.emplace_back("negative order");
    if (ar.size() != static_cast<std::size_t>(std::max(p, 0))) {
        problems.push_back(fmt::format("{} AR coefficients for p = {}", ar.size(), p));
    }
    if (ma.size() != static_cast<std::size_t>(std::max(q, 0))) {
        problems.push_back(fmt::format("{} MA coefficients for q = {}", ma.size(), q));
    }
    if (!ar_is_stationary(ar)) problems.emplace_back("AR polynomial is not stationary");
    if (!ma_is_invertible(ma)) problems.emplace_back("MA polynomial is not invertible");
    if (!problems.empty()) {
        std::string joined;
        for (const auto& s : problems) joined += (joined.empty() ? "" : "; ") + s;
        throw Error(ErrorCode::Validation, "invalid ARIMA model: " + joined);
    }
}

std::vector<double> partials_to_ar(std::span<const double> partials) {
    const std::size_t p = partials.size();
    std::vector<double> phi(p), prev(p);
    for (std::size_t k = 0; k < p; ++k) {
        phi[k] = partials[k];
        for (std::size_t j = 0; j < k; ++j) phi[j] = prev[j] - partials[k] * prev[k - 1 - j];
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(k + 1), prev.begin());
    }
    return phi;
}

std::vector<double> css_residuals(std::span<const double> w, std::span<const double> ar,
                                  std::span<const double> ma, double intercept) {
    const std::size_t p = ar.size();
    const std::size_t q = ma.size();
    if (w.size() <= p) return {};
    std::vector<double> e(w.size(), 0.0);
    for (std::size_t t = p; t < w.size(); ++t) {
        double pred = intercept;
        for (std::size_t i = 0; i < p; ++i) pred += ar[i] * w[t - 1 - i];
        for (std::size_t j = 0; j < q && j + 1 + p <= t; ++j) pred += ma[j] * e[t - 1 - j];
        e[t] = w[t] - pred;
    }
    return {e.begin() + static_cast<std::ptrdiff_t>(p), e.end()};
}

double arima_css(const ArimaSpec& model, std::span<const double> series) {
    const auto y = to_working_scale(series, model.log_levels);
    const auto w = difference(y, model.d);
    const auto e = css_residuals(w, model.ar, model.ma, model.has_intercept ? model.intercept : 0.0);
    double css = 0.0;
    for (double v : e) css += v * v;
    return css;
}

ArimaSpec fit_arima(std::span<const double> series, int p, int d, int q,
                    const ArimaOptions& options) {
    check_orders(p, d, q);
    const auto floor = static_cast<std::size_t>(p + q + d + 2);
    if (series.size() < floor) {
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("ARIMA({},{},{}) needs at least {} observations, got {}", p, d, q,
                                floor, series.size()));
    }
    if (series.size() < static_cast<std::size_t>(10 * (p + q + 1))) {
        logger().info("ARIMA({},{},{}) on {} observations is below the recommended {}", p, d, q,
                      series.size(), 10 * (p + q + 1));
    }
    const auto y = to_working_scale(series, options.log_levels);
    const auto w = difference(y, d);
    const bool intercept = options.include_intercept.value_or(d == 0);
    const double scale = stddev_or_one(w);
    std::vector<double> ws(w.size());
    std::transform(w.begin(), w.end(), ws.begin(), [scale](double v) { return v / scale; });

    const auto objective = [&](std::span<const double> x) {
        const auto u = unpack(x, p, q, intercept);
        double css = 0.0;
        for (double e : css_residuals(ws, u.ar, u.ma, u.intercept)) css += e * e;
        return css;
    };
    std::vector<double> x0(static_cast<std::size_t>((intercept ? 1 : 0) + p + q), 0.0);
    if (intercept) {
        x0[0] = std::accumulate(ws.begin(), ws.end(), 0.0) / static_cast<double>(ws.size());
    }
    const auto best = optim::minimize(objective, x0, options.optimizer);
    auto u = unpack(best.x, p, q, intercept);
    if (!best.converged) {
        std::vector<double> params;
        if (intercept) params.push_back(u.intercept * scale);
        params.insert(params.end(), u.ar.begin(), u.ar.end());
        params.insert(params.end(), u.ma.begin(), u.ma.end());
        throw ConvergenceError(
            fmt::format("ARIMA({},{},{}) did not converge within {} iterations per start", p, d,
                        q, options.optimizer.max_iterations),
            std::move(params), best.value * scale * scale);
    }

    ArimaSpec spec;
    spec.p = p;
    spec.d = d;
    spec.q = q;
    spec.ar = std::move(u.ar);
    spec.ma = std::move(u.ma);
    spec.has_intercept = intercept;
    spec.intercept = intercept ? u.intercept * scale : 0.0;
    spec.log_levels = options.log_levels;
    spec.residuals = css_residuals(w, spec.ar, spec.ma, spec.intercept);
    spec.css = 0.0;
    for (double e : spec.residuals) spec.css += e * e;
    spec.sigma2 = spec.residuals.empty() ? 0.0
                                         : spec.css / static_cast<double>(spec.residuals.size());
    spec.validate();
    return spec;
}

std::vector<double> forecast_arima(const ArimaSpec& model, std::span<const double> last_observations,
                                   std::size_t horizon) {
    const auto needed = static_cast<std::size_t>(model.p + model.d);
    if (last_observations.size() < std::max<std::size_t>(needed, 1) ||
        last_observations.size() <= static_cast<std::size_t>(model.d)) {
        throw Error(ErrorCode::InsufficientData,
                    fmt::format("ARIMA({},{},{}) forecast needs at least {} trailing observations",
                                model.p, model.d, model.q, std::max<std::size_t>(needed, model.d + 1)));
    }
    const auto y = to_working_scale(last_observations, model.log_levels);

    // Last value at each differencing level, for integrating back.
    std::vector<double> anchors;
    std::vector<double> level(y.begin(), y.end());
    for (int k = 0; k < model.d; ++k) {
        anchors.push_back(level.back());
        level = difference(level, 1);
    }
    const std::vector<double>& w = level;
    const double c = model.has_intercept ? model.intercept : 0.0;
    const auto resid = css_residuals(w, model.ar, model.ma, c);

    std::vector<double> w_ext(w.begin(), w.end());
    std::vector<double> e_ext(w.size() - resid.size(), 0.0);
    e_ext.insert(e_ext.end(), resid.begin(), resid.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t t = w_ext.size();
        double pred = c;
        for (std::size_t i = 0; i < model.ar.size(); ++i) pred += model.ar[i] * w_ext[t - 1 - i];
        for (std::size_t j = 0; j < model.ma.size(); ++j) {
            if (t >= j + 1) pred += model.ma[j] * e_ext[t - 1 - j];
        }
        w_ext.push_back(pred);
        e_ext.push_back(0.0);
        out.push_back(pred);
    }
    for (int k = model.d - 1; k >= 0; --k) {
        double acc = anchors[static_cast<std::size_t>(k)];
        for (double& v : out) {
            acc += v;
            v = acc;
        }
    }
    if (model.log_levels) {
        for (double& v : out) v = std::exp(v);
    }
    return out;
}

std::vector<double> psi_weights(const ArimaSpec& model, std::size_t n) {
    // Full AR operator φ(B)(1 − B)^d.
    std::vector<double> poly(model.ar.size() + 1);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < model.ar.size(); ++i) poly[i + 1] = -model.ar[i];
    for (int k = 0; k < model.d; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> psi(n, 0.0);
    if (n == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) {
        double v = j <= model.ma.size() ? model.ma[j - 1] : 0.0;
        for (std::size_t i = 1; i < poly.size() && i <= j; ++i) v -= poly[i] * psi[j - i];
        psi[j] = v;
    }
    return psi;
}

double arima_aic(const ArimaSpec& model) {
    const auto n = static_cast<double>(model.residuals.size());
    const int k = model.p + model.q + (model.has_intercept ? 1 : 0) + 1;
    const double css = std::max(model.css, std::numeric_limits<double>::min());
    return n * std::log(css / n) + 2.0 * k;
}

namespace {

// CSS fits pile up on the invertibility boundary, where the conditional sum
// of squares understates the fit's true likelihood and AIC favours them.
constexpr double kBoundaryMargin = 1e-3;

bool on_unit_circle(const ArimaSpec& fit) {
    return min_root_modulus(fit.ar, -1.0) < 1.0 + kBoundaryMargin ||
           min_root_modulus(fit.ma, 1.0) < 1.0 + kBoundaryMargin;
}

// AIC over the last `n` residuals so every order in the grid is scored on
// the same observations.
double common_sample_aic(const ArimaSpec& fit, std::size_t n) {
    const auto tail = std::span<const double>(fit.residuals).last(n);
    const double css = std::inner_product(tail.begin(), tail.end(), tail.begin(), 0.0);
    const int k = fit.p + fit.q + (fit.has_intercept ? 1 : 0) + 1;
    const auto nn = static_cast<double>(n);
    return nn * std::log(std::max(css, std::numeric_limits<double>::min()) / nn) + 2.0 * k;
}

}  // namespace

OrderChoice select_order(std::span<const double> series, int max_p, int max_d, int max_q,
                         const ArimaOptions& options) {
    check_orders(max_p, max_d, max_q);
    const auto lost = static_cast<std::size_t>(max_p + max_d);
    if (series.size() <= lost + 1) {
        throw Error(ErrorCode::InsufficientData, "series too short for the order grid");
    }
    const std::size_t common = series.size() - lost;
    std::optional<OrderChoice> best;
    const auto better = [](const OrderChoice& a, const OrderChoice& b) {
        constexpr double tie = 1e-9;
        if (a.aic < b.aic - tie) return true;
        if (a.aic > b.aic + tie) return false;
        if (a.p + a.q != b.p + b.q) return a.p + a.q < b.p + b.q;
        return a.d < b.d;
    };
    for (int d = 0; d <= max_d; ++d) {
        for (int p = 0; p <= max_p; ++p) {
            for (int q = 0; q <= max_q; ++q) {
                try {
                    const auto fit = fit_arima(series, p, d, q, options);
                    if (on_unit_circle(fit)) {
                        logger().debug("ARIMA({},{},{}) skipped: root on the unit circle", p, d, q);
                        continue;
                    }
                    const OrderChoice choice{p, d, q, common_sample_aic(fit, common)};
                    if (!best || better(choice, *best)) best = choice;
                } catch (const Error& e) {
                    logger().debug("ARIMA({},{},{}) skipped: {}", p, d, q, e.what());
                }
            }
        }
    }
    if (!best) throw Error(ErrorCode::Convergence, "no ARIMA order in the grid could be fitted");
    return *best;
}

}  // namespace crashvol::tsa
