#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crashvol {

enum class ErrorCode {
    Parse,
    Gap,
    Validation,
    Range,
    Domain,
    InsufficientData,
    DegenerateVariance,
    Convergence,
    Alignment,
    Io,
    Usage,
};

/// Stable machine-readable tag, e.g. "E_GAP".
std::string_view error_tag(ErrorCode code) noexcept;

/**
 * @brief Base error for every failure raised by the toolkit.
 *
 * Each error carries a category code so the CLI can print a single
 * `error[E_...]: message` line and pick an exit status.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when an optimizer exhausts its iteration budget. Carries the
/// best point found so callers can inspect or reuse it.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, std::vector<double> best_params,
                     double best_value)
        : Error(ErrorCode::Convergence, message),
          best_params_(std::move(best_params)),
          best_value_(best_value) {}

    [[nodiscard]] const std::vector<double>& best_params() const noexcept { return best_params_; }
    [[nodiscard]] double best_value() const noexcept { return best_value_; }

private:
    std::vector<double> best_params_;
    double best_value_;
};

}  // namespace crashvol
