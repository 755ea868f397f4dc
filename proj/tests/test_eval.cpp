#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "crashvol/error.hpp"
#include "crashvol/eval/backtest.hpp"
#include "crashvol/eval/calibration.hpp"
#include "crashvol/eval/metrics.hpp"
#include "crashvol/eval/report_io.hpp"
#include "crashvol/sim/param_file.hpp"
#include "support.hpp"

using namespace crashvol;
using namespace crashvol::eval;
using doctest::Approx;

namespace {

bool throws_code(auto&& fn, ErrorCode code) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

data::MonthlySeries constant_series(data::YearMonth start, int months, double rate) {
    std::vector<data::MonthlyObservation> obs;
    for (int i = 0; i < months; ++i) obs.push_back({start.plus_months(i), 1000, 1000.0 / rate});
    return data::MonthlySeries::from_observations(std::move(obs));
}

sim::ForecastQuantiles band_forecast(data::YearMonth start, std::vector<double> median, double half_width) {
    sim::ForecastQuantiles q;
    q.start = start;
    q.levels = {0.05, 0.25, 0.75, 0.95};
    q.median = median;
    for (double k : {-2.0, -1.0, 1.0, 2.0}) {
        std::vector<double> b;
        for (double m : median) b.push_back(m + k * half_width);
        q.bands.push_back(b);
    }
    return q;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("error statistics") {
    const std::vector<double> f{1, 2};
    const std::vector<double> o{2, 2};
    const auto s = error_stats(f, o);
    CHECK(s.mae == 0.5);
    CHECK(s.rmse == Approx(std::sqrt(0.5)));
    CHECK(s.mape == 0.25);
    const auto zero = error_stats(o, o);
    CHECK(zero.mae == 0.0);
    CHECK(zero.rmse == 0.0);
    CHECK(zero.mape == 0.0);
    const std::vector<double> obs{0.004, 0.005, 0.006};
    std::vector<double> high;
    for (double v : obs) high.push_back(v * 1.1);
    CHECK(error_stats(high, obs).mape == Approx(0.10).epsilon(1e-12));
    CHECK(throws_code([&] { (void)error_stats(f, obs); }, ErrorCode::Alignment));
    const std::vector<double> with_zero{0.0, 1.0};
    CHECK(throws_code([&] { (void)error_stats(f, with_zero); }, ErrorCode::Domain));
}

TEST_CASE("error statistic properties") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.001, 0.01);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> f(24), o(24);
        for (auto& v : f) v = u(rng);
        for (auto& v : o) v = u(rng);
        const auto s = error_stats(f, o);
        CHECK(s.rmse >= s.mae);
        CHECK(s.mape >= 0.0);
        std::vector<double> shifted = o;
        for (auto& v : shifted) v += 0.0003;
        CHECK(error_stats(shifted, o).mae > error_stats(o, o).mae);
    }
}

TEST_CASE("yearly report") {
    const data::YearMonth start{2015, 1};
    std::vector<double> obs(24);
    for (std::size_t i = 0; i < 24; ++i) obs[i] = 0.004 + 0.0001 * static_cast<double>(i);
    const DatedSeries observed{start, obs};
    const auto same = yearly_error_report(observed, observed, "m");
    REQUIRE(same.per_year.size() == 2);
    CHECK(same.per_year[0].year == 2015);
    CHECK(same.overall.mape == 0.0);
    CHECK(same.n_months == 24);

    auto f = obs;
    for (std::size_t i = 0; i < 12; ++i) f[i] *= 1.1;
    const auto r = yearly_error_report({start, f}, observed, "m");
    CHECK(r.per_year[0].stats.mape == Approx(0.10));
    CHECK(r.per_year[1].stats.mape == 0.0);
    CHECK(r.overall.mape == Approx(0.05));
    CHECK(r.overall.mae == Approx((r.per_year[0].stats.mae + r.per_year[1].stats.mae) / 2));
    for (const auto& y : r.per_year) CHECK(y.stats.rmse >= y.stats.mae);

    // Partial years are allowed but dates must line up exactly.
    const auto partial = yearly_error_report({{2015, 7}, {0.004, 0.004, 0.004, 0.004, 0.004, 0.004, 0.004}},
                                             {{2015, 7}, {0.004, 0.004, 0.004, 0.004, 0.004, 0.004, 0.004}}, "m");
    CHECK(partial.per_year.size() == 2);
    CHECK(throws_code([&] { (void)yearly_error_report({{2015, 2}, f}, observed, "m"); }, ErrorCode::Alignment));
    try {
        (void)yearly_error_report({{2016, 1}, obs}, observed, "m");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("2016-01") != std::string::npos);
    }
}

TEST_CASE("report CSV") {
    const DatedSeries observed{{2015, 1}, std::vector<double>(12, 0.005)};
    const auto r = yearly_error_report(observed, observed, "heston");
    CHECK(report_to_csv(r) == "model,year,mae,rmse,mape\nheston,2015,0,0,0\nheston,overall,0,0,0\n");
}

TEST_CASE("interval coverage") {
    const std::vector<double> obs{0.004, 0.005, 0.006, 0.005};
    const auto q = band_forecast({2015, 1}, obs, 0.0005);
    const DatedSeries observed{{2015, 1}, obs};
    CHECK(interval_coverage(q, observed, 0.25, 0.75).outside == 0);
    std::vector<double> above;
    for (double v : obs) above.push_back(v + 0.01);
    const auto c = interval_coverage(q, {{2015, 1}, above}, 0.25, 0.75);
    CHECK(c.outside == 4);
    CHECK(c.fraction == 1.0);
    CHECK(throws_code([&] { (void)interval_coverage(q, observed, 0.75, 0.25); }, ErrorCode::Validation));
    CHECK(throws_code([&] { (void)interval_coverage(q, {{2015, 2}, obs}, 0.25, 0.75); }, ErrorCode::Alignment));
}

TEST_CASE("wider bands never add breaches") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z(0.005, 0.001);
    std::vector<double> obs(60), med(60, 0.005);
    for (auto& v : obs) v = z(rng);
    const auto q = band_forecast({2015, 1}, med, 0.0008);
    const DatedSeries observed{{2015, 1}, obs};
    CHECK(interval_coverage(q, observed, 0.05, 0.95).outside <= interval_coverage(q, observed, 0.25, 0.75).outside);
    CHECK(interval_coverage(q, observed, 0.05, 0.95).outside <= interval_coverage(q, observed, 0.05, 0.75).outside);
}

TEST_CASE("Heston inputs fitted from the 2010-2014 window") {
    CalibrationOptions o;
    o.prior_rate = testing::december_2009_rate();
    const auto model = calibrate_heston(testing::both_tables(), {2010, 1}, {2014, 12}, o);
    const auto& h = std::get<sim::HestonParams>(model.params);
    CHECK(testing::near(h.c1, 0.00498, 0.00001));
    CHECK(testing::near(h.mu, 0.1361, 0.005));
    CHECK(testing::near(std::sqrt(h.theta), 0.6333, 0.0005));
    CHECK(h.v0 == h.theta);
    CHECK(testing::near(h.xi, 0.2626, 0.0005));
    CHECK(testing::near(h.kappa, 0.0545, 0.0005));
    CHECK(h.kappa > sim::feller_bound(h.xi, std::sqrt(h.theta)));
    CHECK(h.rho == kDefaultRho);
    REQUIRE(h.spikes.size() == 3);
    CHECK(h.spikes[1].month == 7);
    CHECK(testing::near(h.spikes[1].mean, 0.334, 0.002));
    CHECK(h.start == data::YearMonth{2015, 1});
    CHECK(model.history_tail == testing::history_2014());

    // Without the following month C1 falls back to the last training rate.
    const auto alone = window_statistics(testing::table1(), {2010, 1}, {2014, 12}, o);
    CHECK(alone.c1 == testing::table1().rates().back());
    o.c1 = 0.006;
    CHECK(window_statistics(testing::table1(), {2010, 1}, {2014, 12}, o).c1 == 0.006);
}

TEST_CASE("Vasicek inputs") {
    const auto model = calibrate_vasicek(testing::both_tables(), {2010, 1}, {2014, 12});
    const auto& v = std::get<sim::VasicekParams>(model.params);
    const auto r = testing::to_vector(data::slice_window(testing::both_tables(), {2010, 1}, {2014, 12}).rates());
    CHECK(v.kappa == Approx(sim::vasicek_kappa_from_ar1(ar1_slope(r))));
    CHECK(v.kappa >= 0.0);
    CHECK(v.kappa <= 12.0);
    CHECK(v.sigma > 0.5);
    const std::vector<double> ar{1.0, 0.5, 0.25, 0.125};
    CHECK(ar1_slope(ar) == Approx(0.5));
}

TEST_CASE("backtest with all noise off on a constant series") {
    const auto s = constant_series({2019, 1}, 24, 0.005);
    auto kv = sim::to_key_values({sim::HestonParams{.c1 = 0.005, .start = {2020, 1}}, {}});
    ModelConfig c;
    c.parameters = kv;
    c.n_paths = 20;
    const auto r = backtest(s, {2019, 1}, {2019, 12}, {2020, 1}, {2020, 12}, c, 1);
    CHECK(r.report.overall.mape == 0.0);
    CHECK(r.report.overall.mae == 0.0);
}

TEST_CASE("backtest window rules") {
    const auto s = testing::both_tables();
    ModelConfig c;
    c.n_paths = 50;
    CHECK(throws_code([&] { (void)backtest(s, {2010, 1}, {2014, 12}, {2014, 6}, {2019, 12}, c, 1); }, ErrorCode::Range));
    CHECK(throws_code([&] { (void)backtest(s, {2010, 1}, {2014, 12}, {2015, 3}, {2019, 12}, c, 1); }, ErrorCode::Range));
    CHECK(throws_code([&] { (void)backtest(s, {2010, 1}, {2014, 12}, {2015, 1}, {2020, 12}, c, 1); }, ErrorCode::Range));
}

TEST_CASE("backtests are pure functions of their inputs") {
    const auto s = testing::both_tables();
    ModelConfig c;
    c.n_paths = 400;
    c.calibration.prior_rate = testing::december_2009_rate();
    const auto a = backtest(s, {2010, 1}, {2014, 12}, {2015, 1}, {2019, 12}, c, 17);
    const auto b = backtest(s, {2010, 1}, {2014, 12}, {2015, 1}, {2019, 12}, c, 17);
    CHECK(report_to_csv(a.report) == report_to_csv(b.report));
    CHECK(sim::forecast_to_csv(a.forecast) == sim::forecast_to_csv(b.forecast));
    CHECK(a.report.per_year.size() == 5);
    CHECK(a.report.n_months == 60);
}

TEST_CASE("overrides") {
    const auto s = testing::both_tables();
    ModelConfig c;
    c.overrides = {{"rho", "0"}};
    CHECK(fit_model(s, {2010, 1}, {2014, 12}, c).require_double("rho") == 0.0);
    c.overrides = {{"not_a_key", "1"}};
    CHECK(throws_code([&] { (void)fit_model(s, {2010, 1}, {2014, 12}, c); }, ErrorCode::Usage));
}

TEST_CASE("ARIMA family backtests") {
    const auto s = testing::both_tables();
    ModelConfig a;
    a.kind = ModelKind::Arima;
    ModelConfig g = a;
    g.kind = ModelKind::ArimaGarch;
    const auto ra = backtest(s, {2010, 1}, {2014, 12}, {2015, 1}, {2019, 12}, a, 1);
    const auto rg = backtest(s, {2010, 1}, {2014, 12}, {2015, 1}, {2019, 12}, g, 1);
    CHECK(ra.forecast.median == rg.forecast.median);
    CHECK(ra.report.overall.mape == rg.report.overall.mape);
    CHECK(rg.parameters.require("model") == "arima-garch");
    CHECK(parse_model_kind("arima-garch") == ModelKind::ArimaGarch);
    CHECK(throws_code([] { (void)parse_model_kind("garch"); }, ErrorCode::Usage));
}

}  // TEST_SUITE
