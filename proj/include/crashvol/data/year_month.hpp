#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace crashvol::data {

/// Calendar month. Ordered; arithmetic is in whole months.
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    friend constexpr auto operator<=>(const YearMonth&, const YearMonth&) = default;

    /// Months since year 0 January; used for contiguity checks and offsets.
    [[nodiscard]] constexpr int ordinal() const noexcept { return year * 12 + (month - 1); }
    [[nodiscard]] static constexpr YearMonth from_ordinal(int ordinal) noexcept {
        const int y = ordinal >= 0 ? ordinal / 12 : (ordinal - 11) / 12;
        return YearMonth{y, ordinal - y * 12 + 1};
    }
    [[nodiscard]] constexpr YearMonth plus_months(int n) const noexcept {
        return from_ordinal(ordinal() + n);
    }
    [[nodiscard]] constexpr bool valid() const noexcept { return month >= 1 && month <= 12; }

    /// "YYYY-MM"
    [[nodiscard]] std::string str() const;

    /// Parses "YYYY-MM"; throws Error(Parse) otherwise.
    static YearMonth parse(std::string_view text);
};

/// Months between two dates, inclusive of both ends (a ≤ b assumed).
constexpr int months_inclusive(YearMonth a, YearMonth b) noexcept {
    return b.ordinal() - a.ordinal() + 1;
}

}  // namespace crashvol::data
