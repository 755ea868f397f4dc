#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crashvol/data/year_month.hpp"

namespace crashvol::sim {

/// Row-major n_paths × horizon matrix.
class PathMatrix {
public:
    PathMatrix() = default;
    PathMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    [[nodiscard]] std::span<double> row(std::size_t r) noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::vector<double> column(std::size_t c) const;
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const PathMatrix&, const PathMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/**
 * @brief Monte Carlo output of a rate model.
 *
 * `rates` are the reported monthly rates (spikes applied); `base_rates` are
 * the pre-spike Euler states that drive the recursion; `variances` hold the
 * variance state after each step. Column t is calendar month start + t.
 */
struct SimulationResult {
    std::string model;
    PathMatrix rates;
    PathMatrix base_rates;
    PathMatrix variances;
    std::uint64_t seed = 0;
    double dt = 1.0 / 12.0;
    data::YearMonth start;
    std::vector<double> history_tail;

    [[nodiscard]] std::size_t n_paths() const noexcept { return rates.rows(); }
    [[nodiscard]] std::size_t horizon() const noexcept { return rates.cols(); }
};

}  // namespace crashvol::sim
