#include "crashvol/sim/param_file.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/io/csv.hpp"

namespace crashvol::sim {

namespace {

void put_common(io::KeyValueFile& kv, double dt, Scheme scheme, data::YearMonth start,
                const std::vector<SpikeSpec>& spikes, const std::vector<double>& history) {
    kv.set("dt", dt);
    kv.set("scheme", std::string(to_string(scheme)));
    kv.set("start_year", std::to_string(start.year));
    kv.set("start_month", std::to_string(start.month));
    auto sorted = spikes;
    std::sort(sorted.begin(), sorted.end(),
              [](const SpikeSpec& a, const SpikeSpec& b) { return a.month < b.month; });
    for (const auto& s : sorted) {
        kv.set(fmt::format("spike.{}.mean", s.month), s.mean);
        kv.set(fmt::format("spike.{}.std", s.month), s.stddev);
    }
    std::string tail;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i > 0) tail += ',';
        tail += io::format_roundtrip(history[i]);
    }
    kv.set("history_tail", tail);
}

std::vector<SpikeSpec> read_spikes(const io::KeyValueFile& kv) {
    std::vector<SpikeSpec> spikes;
    for (const auto& [key, value] : kv.entries()) {
        if (key.rfind("spike.", 0) != 0) continue;
        const auto dot = key.find('.', 6);
        if (dot == std::string::npos) {
            throw Error(ErrorCode::Parse, fmt::format("malformed spike key '{}'", key));
        }
        const int month = static_cast<int>(io::parse_integer(key.substr(6, dot - 6), key));
        const auto field = key.substr(dot + 1);
        auto it = std::find_if(spikes.begin(), spikes.end(),
                               [&](const SpikeSpec& s) { return s.month == month; });
        if (it == spikes.end()) {
            spikes.push_back(SpikeSpec{month, 0.0, 0.0});
            it = spikes.end() - 1;
        }
        if (field == "mean") {
            it->mean = io::parse_double(value, key);
        } else if (field == "std") {
            it->stddev = io::parse_double(value, key);
        } else {
            throw Error(ErrorCode::Parse, fmt::format("unknown spike field in '{}'", key));
        }
    }
    for (const auto& s : spikes) {
        if (!kv.contains(fmt::format("spike.{}.mean", s.month)) ||
            !kv.contains(fmt::format("spike.{}.std", s.month))) {
            throw Error(ErrorCode::Parse,
                        fmt::format("spike {} needs both .mean and .std", s.month));
        }
    }
    std::sort(spikes.begin(), spikes.end(),
              [](const SpikeSpec& a, const SpikeSpec& b) { return a.month < b.month; });
    return spikes;
}

data::YearMonth read_start(const io::KeyValueFile& kv) {
    data::YearMonth start{static_cast<int>(kv.require_integer("start_year")),
                          static_cast<int>(kv.require_integer("start_month"))};
    if (!start.valid()) throw Error(ErrorCode::Parse, "start_month outside 1..12");
    return start;
}

std::vector<double> read_history(const io::KeyValueFile& kv) {
    const auto text = kv.get("history_tail");
    if (!text || io::trim(*text).empty()) return {};
    return io::parse_double_list(*text, "history_tail");
}

}  // namespace

io::KeyValueFile to_key_values(const StochasticModel& model) {
    io::KeyValueFile kv;
    if (const auto* h = std::get_if<HestonParams>(&model.params)) {
        kv.set("model", std::string("heston"));
        kv.set("c1", h->c1);
        kv.set("mu", h->mu);
        kv.set("v0_vol", std::sqrt(h->v0));
        kv.set("theta_vol", std::sqrt(h->theta));
        kv.set("kappa", h->kappa);
        kv.set("xi", h->xi);
        kv.set("rho", h->rho);
        put_common(kv, h->dt, h->scheme, h->start, h->spikes, model.history_tail);
    } else {
        const auto& v = std::get<VasicekParams>(model.params);
        kv.set("model", std::string("vasicek"));
        kv.set("c1", v.c1);
        kv.set("mu", v.mu);
        kv.set("kappa", v.kappa);
        kv.set("sigma", v.sigma);
        put_common(kv, v.dt, v.scheme, v.start, v.spikes, model.history_tail);
    }
    return kv;
}

StochasticModel stochastic_model_from(const io::KeyValueFile& kv) {
    const auto kind = kv.get("model").value_or("heston");
    StochasticModel model;
    model.history_tail = read_history(kv);
    const auto scheme = parse_scheme(kv.get("scheme").value_or("reflect"));
    if (kind == "heston") {
        HestonParams h;
        h.c1 = kv.require_double("c1");
        h.mu = kv.require_double("mu");
        const double v0_vol = kv.require_double("v0_vol");
        const double theta_vol = kv.require_double("theta_vol");
        h.v0 = v0_vol * v0_vol;
        h.theta = theta_vol * theta_vol;
        h.kappa = kv.require_double("kappa");
        h.xi = kv.require_double("xi");
        h.rho = kv.require_double("rho");
        h.dt = kv.get_double("dt", 1.0 / 12.0);
        h.scheme = scheme;
        h.start = read_start(kv);
        h.spikes = read_spikes(kv);
        model.params = h;
    } else if (kind == "vasicek") {
        VasicekParams v;
        v.c1 = kv.require_double("c1");
        v.mu = kv.require_double("mu");
        v.kappa = kv.require_double("kappa");
        v.sigma = kv.require_double("sigma");
        v.dt = kv.get_double("dt", 1.0 / 12.0);
        v.scheme = scheme;
        v.start = read_start(kv);
        v.spikes = read_spikes(kv);
        model.params = v;
    } else {
        throw Error(ErrorCode::Parse, fmt::format("unknown stochastic model '{}'", kind));
    }
    return model;
}

void write_stochastic_model(const std::filesystem::path& path, const StochasticModel& model) {
    to_key_values(model).write(path);
}

StochasticModel read_stochastic_model(const std::filesystem::path& path) {
    return stochastic_model_from(io::KeyValueFile::read(path));
}

}  // namespace crashvol::sim
