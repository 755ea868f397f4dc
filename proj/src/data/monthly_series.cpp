#include "crashvol/data/monthly_series.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/io/csv.hpp"

namespace crashvol::data {

namespace {

constexpr std::string_view kHeader = "year,month,crashes,vmt_thousands";

void validate_observation(const MonthlyObservation& obs) {
    if (!obs.date.valid()) {
        throw Error(ErrorCode::Validation,
                    fmt::format("month {} of year {} is outside 1..12", obs.date.month,
                                obs.date.year));
    }
    if (obs.crashes < 0) {
        throw Error(ErrorCode::Validation,
                    fmt::format("{}: negative crash count {}", obs.date.str(), obs.crashes));
    }
    if (!(obs.vmt_thousands > 0.0)) {
        throw Error(ErrorCode::Validation,
                    fmt::format("{}: vmt_thousands must be positive, got {}", obs.date.str(),
                                obs.vmt_thousands));
    }
}

}  // namespace

MonthlySeries MonthlySeries::from_observations(std::vector<MonthlyObservation> observations) {
    for (const auto& obs : observations) validate_observation(obs);
    std::stable_sort(observations.begin(), observations.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < observations.size(); ++i) {
        const auto prev = observations[i - 1].date;
        const auto cur = observations[i].date;
        if (cur == prev) {
            throw Error(ErrorCode::Gap, fmt::format("duplicate month {}", cur.str()));
        }
        if (cur.ordinal() != prev.ordinal() + 1) {
            throw Error(ErrorCode::Gap, fmt::format("missing month {} (between {} and {})",
                                                    prev.plus_months(1).str(), prev.str(),
                                                    cur.str()));
        }
    }
    MonthlySeries series;
    series.rates_.reserve(observations.size());
    for (const auto& obs : observations) {
        series.rates_.push_back(static_cast<double>(obs.crashes) / obs.vmt_thousands);
    }
    series.observations_ = std::move(observations);
    return series;
}

YearMonth MonthlySeries::start() const {
    if (observations_.empty()) throw Error(ErrorCode::Range, "empty series has no start");
    return observations_.front().date;
}

YearMonth MonthlySeries::end() const {
    if (observations_.empty()) throw Error(ErrorCode::Range, "empty series has no end");
    return observations_.back().date;
}

std::optional<std::size_t> MonthlySeries::index_of(YearMonth date) const noexcept {
    if (observations_.empty()) return std::nullopt;
    const int offset = date.ordinal() - observations_.front().date.ordinal();
    if (offset < 0 || static_cast<std::size_t>(offset) >= observations_.size()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(offset);
}

bool MonthlySeries::contains(YearMonth date) const noexcept { return index_of(date).has_value(); }

std::optional<double> MonthlySeries::rate_at(YearMonth date) const noexcept {
    if (auto idx = index_of(date)) return rates_[*idx];
    return std::nullopt;
}

MonthlySeries parse_monthly_csv_text(std::string_view text, std::string_view source) {
    const auto lines = io::split_lines(text);
    std::size_t line_no = 0;
    bool seen_header = false;
    std::vector<MonthlyObservation> observations;
    for (auto raw : lines) {
        ++line_no;
        const auto line = io::trim(raw);
        if (line.empty()) continue;
        if (!seen_header) {
            // Tolerate a UTF-8 byte-order mark on the header line.
            auto header = line;
            if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
            if (header != kHeader) {
                throw Error(ErrorCode::Parse,
                            fmt::format("{}:{}: expected header '{}'", source, line_no, kHeader));
            }
            seen_header = true;
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != 4) {
            throw Error(ErrorCode::Parse, fmt::format("{}:{}: expected 4 fields, found {}",
                                                      source, line_no, fields.size()));
        }
        try {
            MonthlyObservation obs;
            obs.date.year = static_cast<int>(io::parse_integer(fields[0], "year"));
            obs.date.month = static_cast<int>(io::parse_integer(fields[1], "month"));
            obs.crashes = io::parse_integer(fields[2], "crashes");
            obs.vmt_thousands = io::parse_double(fields[3], "vmt_thousands");
            observations.push_back(obs);
        } catch (const Error& e) {
            throw Error(e.code(), fmt::format("{}:{}: {}", source, line_no, e.what()));
        }
    }
    if (!seen_header) {
        throw Error(ErrorCode::Parse, fmt::format("{}: empty input, missing header", source));
    }
    if (observations.empty()) {
        throw Error(ErrorCode::Parse, fmt::format("{}: no data rows", source));
    }
    return MonthlySeries::from_observations(std::move(observations));
}

MonthlySeries parse_monthly_csv(const std::filesystem::path& path) {
    return parse_monthly_csv_text(io::read_text_file(path), path.string());
}

MonthlySeries merge_series(std::span<const MonthlySeries> parts) {
    std::vector<MonthlyObservation> all;
    for (const auto& part : parts) {
        all.insert(all.end(), part.observations().begin(), part.observations().end());
    }
    return MonthlySeries::from_observations(std::move(all));
}

std::string to_csv(const MonthlySeries& series) {
    std::string out(kHeader);
    out += '\n';
    for (const auto& obs : series.observations()) {
        out += fmt::format("{},{},{},{}\n", obs.date.year, obs.date.month, obs.crashes,
                           io::format_roundtrip(obs.vmt_thousands));
    }
    return out;
}

MonthlySeries slice_window(const MonthlySeries& series, YearMonth start, YearMonth end) {
    if (end < start) {
        throw Error(ErrorCode::Range,
                    fmt::format("window start {} is after end {}", start.str(), end.str()));
    }
    const auto first = series.index_of(start);
    const auto last = series.index_of(end);
    if (!first || !last) {
        const auto span = series.empty()
                              ? std::string("empty series")
                              : fmt::format("{}..{}", series.start().str(), series.end().str());
        throw Error(ErrorCode::Range, fmt::format("window {}..{} is outside series span {}",
                                                  start.str(), end.str(), span));
    }
    const auto obs = series.observations();
    return MonthlySeries::from_observations(
        std::vector<MonthlyObservation>(obs.begin() + static_cast<std::ptrdiff_t>(*first),
                                        obs.begin() + static_cast<std::ptrdiff_t>(*last) + 1));
}

}  // namespace crashvol::data
