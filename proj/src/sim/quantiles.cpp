#include "crashvol/sim/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/io/csv.hpp"

namespace crashvol::sim {

std::span<const double> ForecastQuantiles::band(double level) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::abs(levels[i] - level) < 1e-12) return bands[i];
    }
    throw Error(ErrorCode::Range, fmt::format("quantile level {} not in forecast", level));
}

double quantile_sorted(std::span<const double> sorted, double level) {
    if (sorted.empty()) throw Error(ErrorCode::InsufficientData, "quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void validate_levels(std::span<const double> levels) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0 && levels[i] < 1.0)) {
            throw Error(ErrorCode::Validation,
                        fmt::format("quantile level {} outside (0, 1)", levels[i]));
        }
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw Error(ErrorCode::Validation, "quantile levels must be sorted and unique");
        }
    }
}

ForecastQuantiles forecast_quantiles(const SimulationResult& result,
                                     std::span<const double> levels) {
    validate_levels(levels);
    if (result.n_paths() == 0 || result.horizon() == 0) {
        throw Error(ErrorCode::InsufficientData, "quantiles of an empty simulation result");
    }
    ForecastQuantiles q;
    q.start = result.start;
    q.levels.assign(levels.begin(), levels.end());
    q.median.resize(result.horizon());
    q.bands.assign(levels.size(), std::vector<double>(result.horizon()));
    for (std::size_t t = 0; t < result.horizon(); ++t) {
        auto column = result.rates.column(t);
        std::sort(column.begin(), column.end());
        q.median[t] = quantile_sorted(column, 0.5);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            q.bands[l][t] = quantile_sorted(column, levels[l]);
        }
    }
    return q;
}

std::string level_label(double level) {
    const double pct = level * 100.0;
    const double rounded = std::round(pct);
    if (std::abs(pct - rounded) < 1e-9) return fmt::format("q{:02d}", static_cast<int>(rounded));
    return "q" + io::format_significant(pct, 10);
}

double parse_level_label(std::string_view label) {
    if (label.size() < 2 || label.front() != 'q') {
        throw Error(ErrorCode::Parse, fmt::format("bad quantile column '{}'", label));
    }
    return io::parse_double(label.substr(1), "quantile column") / 100.0;
}

std::string forecast_to_csv(const ForecastQuantiles& forecast) {
    std::string out = "year,month,median";
    for (double level : forecast.levels) out += "," + level_label(level);
    out += '\n';
    for (std::size_t t = 0; t < forecast.horizon(); ++t) {
        const auto date = forecast.start.plus_months(static_cast<int>(t));
        out += fmt::format("{},{},{}", date.year, date.month,
                           io::format_significant(forecast.median[t], 10));
        for (const auto& band : forecast.bands) out += "," + io::format_significant(band[t], 10);
        out += '\n';
    }
    return out;
}

ForecastQuantiles forecast_from_csv(std::string_view text, std::string_view source) {
    const auto lines = io::split_lines(text);
    ForecastQuantiles q;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    bool header_seen = false;
    std::optional<data::YearMonth> previous;
    for (auto raw : lines) {
        ++line_no;
        const auto line = io::trim(raw);
        if (line.empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (!header_seen) {
            if (fields.size() < 3 || fields[0] != "year" || fields[1] != "month" ||
                fields[2] != "median") {
                throw Error(ErrorCode::Parse,
                            fmt::format("{}:{}: expected header 'year,month,median,...'", source,
                                        line_no));
            }
            for (std::size_t i = 3; i < fields.size(); ++i) {
                q.levels.push_back(parse_level_label(fields[i]));
            }
            q.bands.resize(q.levels.size());
            columns = fields.size();
            header_seen = true;
            continue;
        }
        if (fields.size() != columns) {
            throw Error(ErrorCode::Parse, fmt::format("{}:{}: expected {} fields, found {}",
                                                      source, line_no, columns, fields.size()));
        }
        data::YearMonth date{static_cast<int>(io::parse_integer(fields[0], "year")),
                             static_cast<int>(io::parse_integer(fields[1], "month"))};
        if (!date.valid()) {
            throw Error(ErrorCode::Parse, fmt::format("{}:{}: month out of range", source, line_no));
        }
        if (!previous) {
            q.start = date;
        } else if (date.ordinal() != previous->ordinal() + 1) {
            throw Error(ErrorCode::Gap, fmt::format("{}:{}: forecast rows not consecutive at {}",
                                                    source, line_no, date.str()));
        }
        previous = date;
        q.median.push_back(io::parse_double(fields[2], "median"));
        for (std::size_t i = 3; i < fields.size(); ++i) {
            q.bands[i - 3].push_back(io::parse_double(fields[i], "quantile"));
        }
    }
    if (!header_seen || q.median.empty()) {
        throw Error(ErrorCode::Parse, fmt::format("{}: empty forecast file", source));
    }
    validate_levels(q.levels);
    return q;
}

}  // namespace crashvol::sim
