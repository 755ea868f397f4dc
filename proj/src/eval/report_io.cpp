#include "crashvol/eval/report_io.hpp"

#include <fmt/format.h>

#include "crashvol/io/csv.hpp"

namespace crashvol::eval {

namespace {

std::string row(const std::string& model, const std::string& year, const ErrorStats& s) {
    return fmt::format("{},{},{},{},{}\n", model, year, io::format_significant(s.mae, 10),
                       io::format_significant(s.rmse, 10), io::format_significant(s.mape, 10));
}

}  // namespace

std::string report_to_csv(const ErrorReport& report) {
    std::string out = "model,year,mae,rmse,mape\n";
    for (const auto& y : report.per_year) out += row(report.model_id, std::to_string(y.year), y.stats);
    out += row(report.model_id, "overall", report.overall);
    return out;
}

std::string coverage_to_csv(double low, double high, const Coverage& coverage, std::size_t months) {
    return fmt::format("low,high,outside,months,fraction\n{},{},{},{},{}\n", io::format_roundtrip(low),
                       io::format_roundtrip(high), coverage.outside, months,
                       io::format_significant(coverage.fraction, 10));
}

}  // namespace crashvol::eval
