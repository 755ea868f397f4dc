#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "crashvol/error.hpp"
#include "crashvol/tsa/arima.hpp"
#include "crashvol/tsa/garch.hpp"
#include "crashvol/tsa/model_file.hpp"
#include "crashvol/tsa/polynomial.hpp"
#include "support.hpp"

using namespace crashvol;
using namespace crashvol::tsa;
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

std::vector<double> simulate_arma(double phi, double theta, double c, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> y;
    double prev = c / (1.0 - phi);
    double e_prev = 0.0;
    for (std::size_t t = 0; t < n + 200; ++t) {
        const double e = z(rng);
        const double v = c + phi * prev + e + theta * e_prev;
        if (t >= 200) y.push_back(v);
        prev = v;
        e_prev = e;
    }
    return y;
}

std::vector<double> simulate_garch11(double omega, double alpha, double beta, std::size_t n,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> e;
    double h = omega / (1.0 - alpha - beta);
    double e_prev = 0.0;
    for (std::size_t t = 0; t < n + 500; ++t) {
        h = omega + alpha * e_prev * e_prev + beta * h;
        e_prev = std::sqrt(h) * z(rng);
        if (t >= 500) e.push_back(e_prev);
    }
    return e;
}

void check_roots(const ArimaSpec& m) {
    CHECK(min_root_modulus(m.ar, -1.0) > 1.0);
    CHECK(min_root_modulus(m.ma, 1.0) > 1.0);
}

}  // namespace

TEST_SUITE("tsa") {

TEST_CASE("differencing") {
    const std::vector<double> x{1, 2, 4, 7};
    CHECK(difference(x, 1) == std::vector<double>{1, 2, 3});
    CHECK(difference(x, 2) == std::vector<double>{1, 1});
    CHECK(difference(x, 0) == x);
    CHECK(throws_code([&] { (void)difference(x, 4); }, ErrorCode::InsufficientData));
}

TEST_CASE("polynomial roots") {
    const std::vector<double> c{6.0, -5.0, 1.0};
    auto roots = polynomial_roots(c);
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real() == Approx(2.0));
    CHECK(roots[1].real() == Approx(3.0));
    CHECK(ar_is_stationary(std::vector<double>{0.5}));
    CHECK_FALSE(ar_is_stationary(std::vector<double>{1.2}));
    CHECK_FALSE(ar_is_stationary(std::vector<double>{0.5, 0.6}));
    CHECK(ma_is_invertible(std::vector<double>{0.5}));
    CHECK_FALSE(ma_is_invertible(std::vector<double>{-1.5}));
    CHECK(min_root_modulus(std::vector<double>{}, 1.0) == INFINITY);
}

TEST_CASE("partial autocorrelations map to stationary coefficients") {
    CHECK(partials_to_ar(std::vector<double>{0.4}) == std::vector<double>{0.4});
    const auto two = partials_to_ar(std::vector<double>{0.5, -0.3});
    CHECK(two[0] == Approx(0.5 * (1.0 + 0.3)));
    CHECK(two[1] == Approx(-0.3));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.999, 0.999);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> partials(1 + trial % 5);
        for (auto& p : partials) p = u(rng);
        CHECK(ar_is_stationary(partials_to_ar(partials)));
    }
}

TEST_CASE("AR(1) recovery") {
    const auto y = simulate_arma(0.7, 0.0, 0.0, 2000, 1);
    const auto m = fit_arima(y, 1, 0, 0);
    CHECK(std::abs(m.ar[0] - 0.7) <= 0.05);
    CHECK(m.has_intercept);
    check_roots(m);
    CHECK(arima_css(m, y) == Approx(m.css).epsilon(1e-10));
}

TEST_CASE("MA(1) recovery") {
    const auto y = simulate_arma(0.0, 0.5, 0.0, 2000, 2);
    const auto m = fit_arima(y, 0, 0, 1);
    CHECK(std::abs(m.ma[0] - 0.5) <= 0.05);
    check_roots(m);
    CHECK(arima_css(m, y) == Approx(m.css).epsilon(1e-10));
}

TEST_CASE("white noise fit") {
    const auto y = simulate_arma(0.0, 0.0, 3.0, 500, 3);
    const auto m = fit_arima(y, 0, 0, 0);
    const double mean = testing::mean(y);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean) / static_cast<double>(y.size());
    CHECK(m.intercept == Approx(mean).epsilon(1e-6));
    CHECK(m.sigma2 == Approx(var).epsilon(1e-6));
    CHECK(m.residuals.size() == y.size());
}

TEST_CASE("fits on the crash series satisfy the root conditions") {
    const auto r = testing::to_vector(testing::table1().rates());
    for (auto [p, d, q] : {std::tuple{1, 2, 2}, std::tuple{3, 2, 2}, std::tuple{2, 1, 1}, std::tuple{1, 0, 1}}) {
        const auto m = fit_arima(r, p, d, q);
        check_roots(m);
        CHECK(arima_css(m, r) == Approx(m.css).epsilon(1e-10));
        CHECK(m.residuals.size() == r.size() - static_cast<std::size_t>(d + p));
    }
    const auto logged = fit_arima(r, 1, 1, 1, {.include_intercept = {}, .log_levels = true, .optimizer = {}});
    CHECK(logged.log_levels);
    check_roots(logged);
}

TEST_CASE("too little data") {
    const std::vector<double> y{1, 2, 3, 4, 5, 6};
    CHECK(throws_code([&] { (void)fit_arima(y, 2, 2, 1); }, ErrorCode::InsufficientData));
    CHECK(throws_code([&] { (void)fit_arima(y, -1, 0, 0); }, ErrorCode::Validation));
}

TEST_CASE("optimizer budget exhaustion carries the best point") {
    const auto y = simulate_arma(0.7, 0.3, 0.0, 300, 4);
    ArimaOptions o;
    o.optimizer.max_iterations = 3;
    try {
        (void)fit_arima(y, 1, 0, 1, o);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.code() == ErrorCode::Convergence);
        CHECK(e.best_params().size() == 3);
        CHECK(std::isfinite(e.best_value()));
    }
}

TEST_CASE("ARIMA forecasts") {
    ArimaSpec white;
    white.has_intercept = true;
    white.intercept = 0.0042;
    for (double f : forecast_arima(white, std::vector<double>{0.1}, 5)) CHECK(f == 0.0042);

    ArimaSpec walk;
    walk.d = 1;
    const std::vector<double> last{0.3, 0.5};
    for (double f : forecast_arima(walk, last, 5)) CHECK(f == 0.5);

    ArimaSpec ar;
    ar.p = 1;
    ar.ar = {0.5};
    ar.has_intercept = true;
    const auto f = forecast_arima(ar, std::vector<double>{1.0}, 4);
    CHECK(f == std::vector<double>{0.5, 0.25, 0.125, 0.0625});

    ArimaSpec trend;
    trend.d = 2;
    const std::vector<double> line{1.0, 2.0, 3.0};
    CHECK(forecast_arima(trend, line, 3) == std::vector<double>{4.0, 5.0, 6.0});

    ArimaSpec ar2;
    ar2.p = 2;
    ar2.d = 1;
    ar2.ar = {0.3, 0.2};
    CHECK(throws_code([&] { (void)forecast_arima(ar2, std::vector<double>{1.0, 2.0}, 3); },
                      ErrorCode::InsufficientData));
}

TEST_CASE("stationary forecasts converge to the unconditional mean") {
    const auto y = simulate_arma(0.6, 0.3, 1.0, 800, 5);
    const auto m = fit_arima(y, 1, 0, 1);
    const auto f = forecast_arima(m, y, 500);
    CHECK(std::abs(f.back() - m.intercept / (1.0 - m.ar[0])) <= 1e-6);
}

TEST_CASE("psi weights") {
    ArimaSpec ar;
    ar.p = 1;
    ar.ar = {0.5};
    const auto psi = psi_weights(ar, 4);
    CHECK(psi == std::vector<double>{1.0, 0.5, 0.25, 0.125});
    ArimaSpec walk;
    walk.d = 1;
    for (double w : psi_weights(walk, 5)) CHECK(w == 1.0);
    ArimaSpec ma;
    ma.q = 1;
    ma.ma = {0.4};
    CHECK(psi_weights(ma, 3) == std::vector<double>{1.0, 0.4, 0.0});
}

TEST_CASE("order selection") {
    // AIC over a 32-model grid overfits a sizeable share of replicates, so the
    // property checked is that the true order is the modal choice.
    const auto modal = [](auto&& generate, int max_p, int max_d, int max_q) {
        std::map<std::tuple<int, int, int>, int> counts;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto c = select_order(generate(seed), max_p, max_d, max_q);
            ++counts[{c.p, c.d, c.q}];
        }
        return std::max_element(counts.begin(), counts.end(),
                                [](const auto& a, const auto& b) { return a.second < b.second; })
            ->first;
    };
    const auto ar1 = modal([](std::uint64_t s) { return simulate_arma(0.7, 0.0, 0.0, 300, 100 + s); }, 3, 1, 3);
    CHECK(ar1 == std::tuple{1, 0, 0});
    const auto noise = modal([](std::uint64_t s) { return simulate_arma(0.0, 0.0, 0.0, 300, 500 + s); }, 2, 1, 2);
    CHECK(noise == std::tuple{0, 0, 0});

    const auto y = simulate_arma(0.0, 0.0, 0.0, 300, 7);
    const auto only = select_order(y, 0, 0, 0);
    CHECK((only.p == 0 && only.d == 0 && only.q == 0));
    CHECK(throws_code([&] { (void)select_order(std::vector<double>(4, 1.0), 3, 1, 3); }, ErrorCode::InsufficientData));
}

TEST_CASE("GARCH(1,1) recovery") {
    const auto e = simulate_garch11(0.1, 0.1, 0.8, 5000, 21);
    const auto g = fit_garch(e, 1, 1);
    CHECK(std::abs(g.omega - 0.1) <= 0.1);
    CHECK(std::abs(g.alpha[0] - 0.1) <= 0.1);
    CHECK(std::abs(g.beta[0] - 0.8) <= 0.1);
    for (double h : garch_variance_path(g, e)) CHECK(h > 0.0);
}

TEST_CASE("GARCH on i.i.d. residuals") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0.0, 2.0);
    std::vector<double> e(3000);
    for (auto& v : e) v = z(rng);
    const auto g = fit_garch(e, 1, 1);
    double var = 0.0;
    for (double v : e) var += v * v / static_cast<double>(e.size());
    CHECK(g.persistence() < 0.2);
    CHECK(g.omega == Approx(var * (1.0 - g.persistence())).epsilon(0.05));
    for (double h : garch_variance_path(g, e)) CHECK(h > 0.0);
}

TEST_CASE("GARCH errors") {
    const std::vector<double> flat(100, 0.3);
    CHECK(throws_code([&] { (void)fit_garch(flat, 1, 1); }, ErrorCode::DegenerateVariance));
    CHECK(throws_code([&] { (void)fit_garch(flat, 0, 0); }, ErrorCode::Validation));
    GarchSpec bad;
    bad.omega = 0.1;
    bad.alpha = {0.5};
    bad.beta = {0.6};
    CHECK(throws_code([&] { bad.validate(); }, ErrorCode::Validation));
}

TEST_CASE("GARCH variance forecasts") {
    GarchSpec flat;
    flat.omega = 0.2;
    flat.alpha = {0.0};
    flat.beta = {0.0};
    const std::vector<double> e{0.5, -1.0, 2.0};
    for (double h : forecast_garch_variance(flat, e, 6)) CHECK(h == Approx(0.2));

    GarchSpec g;
    g.omega = 0.1;
    g.alpha = {0.15};
    g.beta = {0.75};
    const auto f = forecast_garch_variance(g, e, 12);
    const double s1 = f[0];
    const auto path = garch_variance_path(g, e);
    CHECK(s1 == Approx(g.omega + 0.15 * 4.0 + 0.75 * path.back()));
    for (std::size_t h = 0; h < f.size(); ++h) {
        double expected = std::pow(0.9, static_cast<double>(h)) * s1;
        for (std::size_t i = 0; i < h; ++i) expected += g.omega * std::pow(0.9, static_cast<double>(i));
        CHECK(f[h] == Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("ARIMA-GARCH point forecasts equal ARIMA forecasts") {
    const auto r = testing::to_vector(testing::table1().rates());
    const auto a = fit_arima(r, 1, 2, 2);
    const auto g = fit_garch(a.residuals, 2, 1);
    g.validate();
    const auto both = forecast_arima_garch(a, g, r, 60);
    CHECK(both.mean == forecast_arima(a, r, 60));
    for (double v : both.variance) CHECK(v > 0.0);
}

TEST_CASE("model files round trip and produce ordered bands") {
    const auto r = testing::to_vector(testing::table1().rates());
    TimeSeriesModel m;
    m.arima = fit_arima(r, 1, 2, 2);
    m.garch = fit_garch(m.arima.residuals, 2, 1);
    m.start = {2015, 1};
    m.history.assign(r.begin(), r.end());
    const auto text = to_key_values(m).to_string();
    const auto back = time_series_model_from(io::KeyValueFile::parse(text));
    CHECK(back.arima.ar == m.arima.ar);
    CHECK(back.arima.ma == m.arima.ma);
    CHECK(back.garch->beta == m.garch->beta);
    CHECK(back.arima.residuals.size() == m.arima.residuals.size());
    for (std::size_t i = 0; i < m.arima.residuals.size(); ++i) {
        CHECK(back.arima.residuals[i] == Approx(m.arima.residuals[i]).epsilon(1e-12));
    }
    CHECK(to_key_values(back).to_string() == text);

    const std::vector<double> levels{0.05, 0.25, 0.75, 0.95};
    const auto q = forecast_time_series(back, 60, levels);
    CHECK(q.median == forecast_arima(m.arima, r, 60));
    for (std::size_t t = 0; t < 60; ++t) {
        CHECK(q.bands[0][t] < q.bands[1][t]);
        CHECK(q.bands[1][t] < q.median[t]);
        CHECK(q.median[t] < q.bands[2][t]);
        CHECK(q.bands[2][t] < q.bands[3][t]);
        CHECK(q.median[t] - q.bands[1][t] == Approx(q.bands[2][t] - q.median[t]));
    }
}

}  // TEST_SUITE
