#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crashvol/data/year_month.hpp"

namespace crashvol::data {

struct MonthlyObservation {
    YearMonth date;
    long long crashes = 0;
    double vmt_thousands = 0.0;  // vehicle-miles travelled, thousands

    friend bool operator==(const MonthlyObservation&, const MonthlyObservation&) = default;
};

/**
 * @brief Contiguous run of monthly crash/VMT observations and their rates.
 *
 * Rates are crashes per thousand vehicle-miles, stored as plain fractions
 * (0.00307, not 0.307%). Instances are immutable once built; every factory
 * validates that months are strictly consecutive with no gaps or duplicates.
 */
class MonthlySeries {
public:
    /// Sorts `observations` by date and validates them.
    static MonthlySeries from_observations(std::vector<MonthlyObservation> observations);

    [[nodiscard]] std::span<const MonthlyObservation> observations() const noexcept {
        return observations_;
    }
    [[nodiscard]] std::span<const double> rates() const noexcept { return rates_; }
    [[nodiscard]] std::size_t size() const noexcept { return observations_.size(); }
    [[nodiscard]] bool empty() const noexcept { return observations_.empty(); }
    [[nodiscard]] YearMonth start() const;
    [[nodiscard]] YearMonth end() const;

    [[nodiscard]] bool contains(YearMonth date) const noexcept;
    [[nodiscard]] std::optional<std::size_t> index_of(YearMonth date) const noexcept;
    [[nodiscard]] std::optional<double> rate_at(YearMonth date) const noexcept;

private:
    std::vector<MonthlyObservation> observations_;
    std::vector<double> rates_;
};

/// Parses CSV text with header `year,month,crashes,vmt_thousands`.
/// `source` names the input in error messages.
MonthlySeries parse_monthly_csv_text(std::string_view text, std::string_view source = "<text>");
MonthlySeries parse_monthly_csv(const std::filesystem::path& path);

/// Concatenates several files' worth of observations into one series.
MonthlySeries merge_series(std::span<const MonthlySeries> parts);

/// Inverse of parse_monthly_csv_text (VMT written with round-trip precision).
std::string to_csv(const MonthlySeries& series);

/// Inclusive sub-range; throws Error(Range) when [start, end] is not inside.
MonthlySeries slice_window(const MonthlySeries& series, YearMonth start, YearMonth end);

}  // namespace crashvol::data
