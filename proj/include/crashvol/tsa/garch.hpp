#pragma once

#include <span>
#include <vector>

#include "crashvol/optim/nelder_mead.hpp"
#include "crashvol/tsa/arima.hpp"

namespace crashvol::tsa {

/**
 * @brief GARCH(p, q) conditional variance model with p ARCH and q GARCH lags.
 *
 *   h_t = omega + Σ alpha[i]·e²_{t-1-i} + Σ beta[j]·h_{t-1-j}
 */
struct GarchSpec {
    int p = 1;  // ARCH order
    int q = 1;  // GARCH order
    double omega = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;
    double log_likelihood = 0.0;  // Gaussian, at the fitted parameters

    [[nodiscard]] double persistence() const noexcept;
    /// Throws Error(Validation) unless omega > 0, all weights ≥ 0, counts
    /// match the orders and persistence < 1.
    void validate() const;
};

/// Conditional variances h_0..h_{n-1}. Pre-sample e² and h are set to the
/// mean of e².
std::vector<double> garch_variance_path(const GarchSpec& spec, std::span<const double> residuals);

/// Gaussian log-likelihood of `residuals` under `spec`.
double garch_log_likelihood(const GarchSpec& spec, std::span<const double> residuals);

/**
 * @brief Gaussian quasi-maximum-likelihood fit.
 *
 * omega is optimized on a log scale; the ARCH and GARCH weights together with
 * a slack term come from a softmax, so positivity and persistence < 1 hold
 * for every trial point. Throws Error(DegenerateVariance) for constant
 * residuals and ConvergenceError when the optimizer budget is exhausted.
 */
GarchSpec fit_garch(std::span<const double> residuals, int p, int q,
                    const optim::NelderMeadOptions& optimizer = {});

/// Variance forecasts h_{n}, …, h_{n+horizon-1} following `residuals`.
std::vector<double> forecast_garch_variance(const GarchSpec& spec, std::span<const double> residuals,
                                            std::size_t horizon);

struct ArimaGarchForecast {
    std::vector<double> mean;      // identical to forecast_arima
    std::vector<double> variance;  // one-step conditional innovation variance per month
};

/// ARIMA point forecasts with GARCH innovation variances. Residuals for the
/// variance recursion are rebuilt by filtering `last_observations`.
ArimaGarchForecast forecast_arima_garch(const ArimaSpec& arima, const GarchSpec& garch,
                                        std::span<const double> last_observations,
                                        std::size_t horizon);

}  // namespace crashvol::tsa
