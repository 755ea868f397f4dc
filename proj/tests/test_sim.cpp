#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "crashvol/error.hpp"
#include "crashvol/sim/components.hpp"
#include "crashvol/sim/heston.hpp"
#include "crashvol/sim/param_file.hpp"
#include "crashvol/sim/quantiles.hpp"
#include "crashvol/sim/rng.hpp"
#include "crashvol/sim/vasicek.hpp"
#include "crashvol/stats/series_stats.hpp"
#include "support.hpp"

using namespace crashvol;
using namespace crashvol::sim;
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

HestonParams quiet_heston() {
    HestonParams p;
    p.c1 = 0.005;
    p.start = {2015, 1};
    return p;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("correlated normal pairs") {
    auto [a, b] = correlated_normal_pair(0.3, -1.2, 0.0);
    CHECK(a == 0.3);
    CHECK(b == -1.2);
    std::tie(a, b) = correlated_normal_pair(0.3, -1.2, 1.0);
    CHECK(b == Approx(0.3));
    CHECK(throws_code([] { (void)correlated_normal_pair(0, 0, 1.01); }, ErrorCode::Domain));

    NormalStream s(7, 0);
    std::vector<double> x(100000), y(100000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z1 = s.next();
        const double z2 = s.next();
        std::tie(x[i], y[i]) = correlated_normal_pair(z1, z2, -0.5936);
    }
    CHECK(std::abs(stats::pearson(x, y) + 0.5936) <= 0.01);
}

TEST_CASE("substreams are distinct and reproducible") {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t p = 0; p < 1000; ++p) seeds.insert(substream_seed(42, p));
    CHECK(seeds.size() == 1000);
    CHECK(substream_seed(42, 3) == substream_seed(42, 3));
    CHECK(substream_seed(42, 3) != substream_seed(43, 3));
    NormalStream a(1, 2), b(1, 2);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("Feller bound in volatility units") {
    // 0.2626^2 / (2 * 0.6333), which rounds to 5.44% rather than 5.45%.
    CHECK(std::abs(feller_bound(0.2626, 0.6333) - 0.0544439918) <= 1e-9);
    CHECK(std::abs(feller_bound(0.2626, 0.6333) - 0.0545) <= 1e-4);
    CHECK(feller_bound(0.0, 0.6333) == 0.0);
    CHECK(throws_code([] { (void)feller_bound(0.2, 0.0); }, ErrorCode::Domain));
    auto p = testing::reference_heston();
    CHECK_FALSE(p.feller_satisfied());  // variance units: bound is 0.086
    p.kappa = 0.09;
    CHECK(p.feller_satisfied());
}

TEST_CASE("variance step") {
    HestonParams p;
    p.theta = 0.4;
    p.kappa = 1.2;
    p.xi = 0.3;
    CHECK(step_variance(0.4, p, 1.0 / 12.0, 0.0) == Approx(0.4));
    p.xi = 0.0;
    CHECK(step_variance(0.8, p, 0.1 / 1.2, 0.0) == Approx(0.76));  // kappa·dt = 0.1 → 1.9θ
    // A large negative draw pushes the raw update below zero.
    p.xi = 1.0;
    p.theta = 0.0;
    p.kappa = 0.0;
    const double v = 1e-6;
    const double dt = 1.0 / 12.0;
    const double raw = v + p.xi * std::sqrt(v * dt) * -1.0;
    REQUIRE(raw < 0.0);
    CHECK(step_variance(v, p, dt, -1.0) == Approx(-raw));
    p.scheme = Scheme::Truncate;
    CHECK(step_variance(v, p, dt, -1.0) == 0.0);
}

TEST_CASE("rate step is state independent") {
    HestonParams p = quiet_heston();
    CHECK(step_rate(0.0042, p, 0.3, 1.0 / 12.0, 0.0) == 0.0042);
    p.c1 = 0.00498;
    p.mu = 0.1361;
    CHECK(step_rate(0.00498, p, 0.0, 1.0 / 12.0, 0.0) == Approx(0.0050365).epsilon(1e-4));
    // Increment does not depend on the current level.
    const double d1 = step_rate(0.004, p, 0.2, 1.0 / 12.0, 0.7) - 0.004;
    const double d2 = step_rate(0.009, p, 0.2, 1.0 / 12.0, 0.7) - 0.009;
    CHECK(d1 == Approx(d2));
    const double neg = step_rate(1e-5, p, 4.0, 1.0 / 12.0, -3.0);
    CHECK(neg > 0.0);
    CHECK(neg == Approx(-(1e-5 + p.mu * p.c1 / 12.0 + 2.0 * p.c1 * std::sqrt(1.0 / 12.0) * -3.0)));
}

TEST_CASE("spike adjustment") {
    const auto spikes = testing::reference_heston().spikes;
    CHECK(spike_adjustment(3, spikes, 1.5) == 0.0);
    CHECK(spike_adjustment(7, spikes, 0.0) == Approx(0.334));
    CHECK(spike_adjustment(1, spikes, 1.0) == Approx(-0.048));
    CHECK(is_spike_month(8, spikes));
    CHECK_FALSE(is_spike_month(2, spikes));
    const std::vector<SpikeSpec> bad{{13, 0.1, 0.1}};
    CHECK(throws_code([&] { validate_spikes(bad); }, ErrorCode::Validation));
    const std::vector<SpikeSpec> negative{{2, 0.1, -0.1}};
    CHECK(throws_code([&] { validate_spikes(negative); }, ErrorCode::Validation));
    const std::vector<SpikeSpec> dup{{2, 0.1, 0.1}, {2, 0.2, 0.1}};
    CHECK(throws_code([&] { validate_spikes(dup); }, ErrorCode::Validation));
}

TEST_CASE("prevailing year average") {
    const std::vector<double> twelve(12, 0.004);
    CHECK(prevailing_year_average(twelve, {}) == Approx(0.004));
    const std::vector<double> three(3, 0.004);
    const std::vector<double> nine(9, 0.004);
    CHECK(prevailing_year_average(three, nine) == Approx(0.004));
    const std::vector<double> sim{0.004, 0.006};
    const std::vector<double> hist(10, 0.005);
    CHECK(prevailing_year_average(sim, hist) == Approx(0.005));
    const std::vector<double> longer(20, 1.0);
    std::vector<double> path(14, 2.0);
    CHECK(prevailing_year_average(path, longer) == Approx(2.0));
    CHECK(throws_code([] { (void)prevailing_year_average({}, {}); }, ErrorCode::InsufficientData));
}

TEST_CASE("Heston with every noise source off stays at C1") {
    const auto p = quiet_heston();
    const auto r = simulate_heston(p, 24, 5, 1, {});
    for (double x : r.rates.data()) CHECK(x == p.c1);
    for (double v : r.variances.data()) CHECK(v == 0.0);
}

TEST_CASE("invalid parameters list every violation") {
    auto p = quiet_heston();
    p.rho = 2.0;
    p.xi = -1.0;
    try {
        (void)simulate_heston(p, 12, 10, 1, {});
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Validation);
        const std::string what = e.what();
        CHECK(what.find("rho") != std::string::npos);
        CHECK(what.find("xi") != std::string::npos);
    }
    CHECK(throws_code([] { (void)simulate_heston(quiet_heston(), 0, 10, 1, {}); }, ErrorCode::Validation));
}

TEST_CASE("simulation is identical for any thread count") {
    const auto p = testing::reference_heston();
    const auto hist = testing::history_2014();
    const auto a = simulate_heston(p, 60, 301, 99, hist, {1});
    const auto b = simulate_heston(p, 60, 301, 99, hist, {4});
    const auto c = simulate_heston(p, 60, 301, 99, hist, {7});
    CHECK(a.rates == b.rates);
    CHECK(a.rates == c.rates);
    CHECK(a.variances == c.variances);
    const auto d = simulate_heston(p, 60, 301, 100, hist, {1});
    CHECK_FALSE(a.rates == d.rates);
    // Path p does not depend on how many paths are drawn.
    const auto e = simulate_heston(p, 60, 10, 99, hist, {1});
    for (std::size_t t = 0; t < 60; ++t) CHECK(e.rates(9, t) == a.rates(9, t));
}

TEST_CASE("rates and variances stay nonnegative under adversarial parameters") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<double> tail{0.001, 0.002};
    for (int trial = 0; trial < 40; ++trial) {
        HestonParams p;
        p.c1 = 1e-4 + 0.01 * u(rng);
        p.mu = -3.0 + 6.0 * u(rng);
        p.v0 = 5.0 * u(rng);
        p.theta = 5.0 * u(rng);
        p.kappa = 20.0 * u(rng);
        p.xi = 4.0 * u(rng);
        p.rho = -1.0 + 2.0 * u(rng);
        p.spikes = {{1, -0.9 - u(rng), 2.0 * u(rng)}, {7, 1.5 * u(rng), u(rng)}};
        p.scheme = trial % 2 == 0 ? Scheme::Reflect : Scheme::Truncate;
        const auto r = simulate_heston(p, 36, 50, static_cast<std::uint64_t>(trial), tail, {1});
        CHECK(std::all_of(r.rates.data().begin(), r.rates.data().end(), [](double x) { return x >= 0.0; }));
        CHECK(std::all_of(r.base_rates.data().begin(), r.base_rates.data().end(),
                          [](double x) { return x >= 0.0; }));
        CHECK(std::all_of(r.variances.data().begin(), r.variances.data().end(),
                          [](double x) { return x >= 0.0; }));

        VasicekParams v;
        v.c1 = p.c1;
        v.mu = -0.9 + 3.0 * u(rng);
        v.kappa = 12.0 * u(rng);
        v.sigma = 5.0 * u(rng);
        v.spikes = p.spikes;
        v.scheme = p.scheme;
        const auto w = simulate_vasicek(v, 36, 50, static_cast<std::uint64_t>(trial), tail, {1});
        CHECK(std::all_of(w.rates.data().begin(), w.rates.data().end(), [](double x) { return x >= 0.0; }));
    }
}

TEST_CASE("July mean exceeds June mean with reference spikes") {
    const auto r = simulate_heston(testing::reference_heston(), 24, 2000, 5, testing::history_2014(), {1});
    for (std::size_t year = 0; year < 2; ++year) {
        const auto june = r.rates.column(12 * year + 5);
        const auto july = r.rates.column(12 * year + 6);
        CHECK(testing::mean(july) > testing::mean(june));
    }
}

TEST_CASE("Vasicek reference paths") {
    VasicekParams v;
    v.c1 = 0.005;
    v.start = {2015, 1};
    v.kappa = 3.0;
    const auto flat = simulate_vasicek(v, 36, 4, 1, {});
    for (double x : flat.rates.data()) CHECK(x == Approx(0.005).epsilon(1e-14));

    v.kappa = 0.0;
    v.mu = 0.2;
    const auto frozen = simulate_vasicek(v, 36, 4, 1, {});
    for (double x : frozen.rates.data()) CHECK(x == 0.005);

    // kappa·dt = 1: each step lands on the start-of-step target, one step
    // behind the growth curve.
    v.kappa = 12.0;
    const auto tracked = simulate_vasicek(v, 60, 2, 1, {});
    for (std::size_t t = 0; t < 60; ++t) {
        const double target_now = v.target(static_cast<double>(t + 1) / 12.0);
        const double lag = v.target(static_cast<double>(t + 1) / 12.0) - v.target(static_cast<double>(t) / 12.0);
        CHECK(std::abs(tracked.rates(0, t) - target_now) <= lag * (1.0 + 1e-9));
    }
    for (std::size_t t = 0; t < 60; ++t) CHECK(tracked.variances(0, t) == 0.0);
}

TEST_CASE("Vasicek kappa from an AR(1) slope") {
    CHECK(vasicek_kappa_from_ar1(std::exp(-1.0 / 12.0)) == Approx(1.0));
    CHECK(vasicek_kappa_from_ar1(1.2) == 0.0);
    CHECK(vasicek_kappa_from_ar1(-0.3) == 12.0);
    CHECK(vasicek_kappa_from_ar1(1e-9) == 12.0);
}

TEST_CASE("quantiles") {
    SimulationResult r;
    r.start = {2015, 1};
    r.rates = PathMatrix(5, 2);
    for (std::size_t p = 0; p < 5; ++p) {
        r.rates(p, 0) = static_cast<double>(5 - p);
        r.rates(p, 1) = 0.004;
    }
    const std::vector<double> levels{0.05, 0.25, 0.75, 0.95};
    const auto q = forecast_quantiles(r, levels);
    CHECK(q.median[0] == 3.0);
    CHECK(q.band(0.25)[0] == 2.0);
    CHECK(q.band(0.05)[0] == Approx(1.2));
    for (std::size_t l = 0; l < 4; ++l) CHECK(q.bands[l][1] == 0.004);
    CHECK(q.median[1] == 0.004);
    CHECK(throws_code([&] { (void)q.band(0.5); }, ErrorCode::Range));
    const std::vector<double> unsorted{0.75, 0.25};
    CHECK(throws_code([&] { (void)forecast_quantiles(r, unsorted); }, ErrorCode::Validation));
    const std::vector<double> outside{0.0, 0.5};
    CHECK(throws_code([&] { (void)forecast_quantiles(r, outside); }, ErrorCode::Validation));
}

TEST_CASE("quantile bands are monotone in level") {
    const auto r = simulate_heston(testing::reference_heston(), 60, 500, 3, testing::history_2014(), {1});
    const std::vector<double> levels{0.05, 0.25, 0.5, 0.75, 0.95};
    const auto q = forecast_quantiles(r, levels);
    for (std::size_t t = 0; t < 60; ++t) {
        for (std::size_t l = 1; l < levels.size(); ++l) CHECK(q.bands[l - 1][t] <= q.bands[l][t]);
        CHECK(q.band(0.5)[t] == q.median[t]);
    }
}

TEST_CASE("forecast CSV layout and round trip") {
    const auto r = simulate_heston(testing::reference_heston(), 60, 200, 3, testing::history_2014(), {1});
    const std::vector<double> levels{0.05, 0.25, 0.75, 0.95};
    const auto q = forecast_quantiles(r, levels);
    const auto csv = forecast_to_csv(q);
    CHECK(csv.rfind("year,month,median,q05,q25,q75,q95\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
    const auto back = forecast_from_csv(csv);
    CHECK(back.start == q.start);
    CHECK(back.levels == q.levels);
    CHECK(forecast_to_csv(back) == csv);
    CHECK(level_label(0.975) == "q97.5");
    CHECK(parse_level_label("q97.5") == Approx(0.975));
}

TEST_CASE("parameter files round trip") {
    StochasticModel m{testing::reference_heston(), testing::history_2014()};
    const auto kv = to_key_values(m);
    CHECK(kv.require_double("theta_vol") == Approx(0.6333));
    CHECK(kv.require_double("spike.7.mean") == 0.334);
    const auto back = stochastic_model_from(io::KeyValueFile::parse(kv.to_string()));
    const auto& h = std::get<HestonParams>(back.params);
    CHECK(h.v0 == Approx(0.6333 * 0.6333));
    CHECK(h.spikes == std::get<HestonParams>(m.params).spikes);
    CHECK(back.history_tail == m.history_tail);

    VasicekParams v;
    v.c1 = 0.005;
    v.mu = 0.03;
    v.kappa = 2.0;
    v.sigma = 0.6;
    v.start = {2015, 1};
    const auto vb = stochastic_model_from(io::KeyValueFile::parse(to_key_values({v, {}}).to_string()));
    CHECK(std::get<VasicekParams>(vb.params).kappa == 2.0);

    CHECK(throws_code([] { (void)stochastic_model_from(io::KeyValueFile::parse("model = other\n")); },
                      ErrorCode::Parse));
    CHECK(throws_code([] { (void)stochastic_model_from(io::KeyValueFile::parse("model = heston\nc1 = 1\n")); },
                      ErrorCode::Parse));
}

}  // TEST_SUITE
