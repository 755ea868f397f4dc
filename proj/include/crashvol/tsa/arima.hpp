#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crashvol/optim/nelder_mead.hpp"

namespace crashvol::tsa {

/// Applies the first-difference operator `d` times. Requires size > d.
std::vector<double> difference(std::span<const double> series, int d);

/**
 * @brief Fitted ARIMA(p, d, q) model.
 *
 * With w the d-times differenced series:
 *   w_t = intercept + Σ ar[i]·w_{t-1-i} + e_t + Σ ma[j]·e_{t-1-j}
 * `residuals` are the in-sample CSS residuals (the first p differenced
 * values are conditioned on and carry no residual).
 */
struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;
    std::vector<double> ar;
    std::vector<double> ma;
    double intercept = 0.0;
    bool has_intercept = false;
    bool log_levels = false;  // model fitted to ln(series)
    std::vector<double> residuals;
    double sigma2 = 0.0;  // css / residuals.size()
    double css = 0.0;     // minimized conditional sum of squares

    /// Throws Error(Validation) unless orders match coefficient counts, the
    /// AR part is stationary, and the MA part is invertible.
    void validate() const;
};

struct ArimaOptions {
    /// Default: intercept only when d == 0.
    std::optional<bool> include_intercept;
    bool log_levels = false;
    optim::NelderMeadOptions optimizer;
};

/// Maps partial autocorrelations in (-1, 1) to stationary AR coefficients
/// (Durbin–Levinson recursion).
std::vector<double> partials_to_ar(std::span<const double> partials);

/// CSS residuals of `differenced` under the given coefficients.
std::vector<double> css_residuals(std::span<const double> differenced, std::span<const double> ar,
                                  std::span<const double> ma, double intercept);

/// Conditional sum of squares of `series` (levels) under `model`.
double arima_css(const ArimaSpec& model, std::span<const double> series);

/**
 * @brief Conditional-sum-of-squares fit by multi-start Nelder–Mead.
 *
 * Stationarity and invertibility are enforced by optimizing unconstrained
 * values mapped through tanh to partial autocorrelations. Throws
 * Error(InsufficientData) below p + q + d + 2 observations and
 * ConvergenceError when the optimizer budget is exhausted.
 */
ArimaSpec fit_arima(std::span<const double> series, int p, int d, int q,
                    const ArimaOptions& options = {});

/// Iterated conditional-mean forecasts in levels. `last_observations` must
/// hold at least p + d values; residuals are rebuilt by filtering them.
std::vector<double> forecast_arima(const ArimaSpec& model, std::span<const double> last_observations,
                                   std::size_t horizon);

/// MA(∞) weights ψ_0..ψ_{n-1} of the integrated model (ψ_0 = 1).
std::vector<double> psi_weights(const ArimaSpec& model, std::size_t n);

/// Akaike criterion from the CSS fit: n·ln(css/n) + 2·(p + q + intercept + 1).
double arima_aic(const ArimaSpec& model);

struct OrderChoice {
    int p = 0;
    int d = 0;
    int q = 0;
    double aic = 0.0;
};

/// Grid search over 0..max for each order minimizing AIC among converged
/// fits, each scored on the residuals of the same final n - max_p - max_d
/// observations. Ties prefer smaller p + q, then smaller d. Fits with a root within
/// 1e-3 of the unit circle are boundary solutions and are skipped.
OrderChoice select_order(std::span<const double> series, int max_p, int max_d, int max_q,
                         const ArimaOptions& options = {});

}  // namespace crashvol::tsa
