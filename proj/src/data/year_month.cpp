#include "crashvol/data/year_month.hpp"

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/io/csv.hpp"

namespace crashvol::data {

std::string YearMonth::str() const { return fmt::format("{:04d}-{:02d}", year, month); }

YearMonth YearMonth::parse(std::string_view text) {
    text = io::trim(text);
    const auto dash = text.find('-');
    if (dash == std::string_view::npos || dash == 0) {
        throw Error(ErrorCode::Parse, fmt::format("expected YYYY-MM, got '{}'", text));
    }
    YearMonth ym{static_cast<int>(io::parse_integer(text.substr(0, dash), "year")),
                 static_cast<int>(io::parse_integer(text.substr(dash + 1), "month"))};
    if (!ym.valid()) {
        throw Error(ErrorCode::Parse, fmt::format("month out of range in '{}'", text));
    }
    return ym;
}

}  // namespace crashvol::data
