#pragma once

#include <random>
#include <vector>

#include "ressize/scenario.hpp"

namespace ressize::testing {

inline TimeSeries series(std::vector<double> values, Unit unit = Unit::mw,
                         const char* start = "2019-01-01T00:00:00Z", int step_s = 3600) {
    TimeSeries ts;
    ts.start = parse_utc(start);
    ts.step = std::chrono::seconds(step_s);
    ts.values = std::move(values);
    ts.unit = unit;
    return ts;
}

inline TimeSeries constant_series(std::size_t n, double v, Unit unit = Unit::mw) {
    return series(std::vector<double>(n, v), unit);
}

// Small well-formed scenario: one coal plant plus one PV plant.
inline ScenarioConfig two_plant_config(std::size_t horizon = 24) {
    ScenarioConfig cfg;
    cfg.name = "two_plant";
    cfg.demand = constant_series(horizon, 100.0);
    cfg.conventional.push_back({"coal", 200.0, 40.0});
    VariableRenewablePlant pv;
    pv.name = "pv";
    pv.technology = RenewableTech::pv;
    std::vector<double> avail(horizon);
    for (std::size_t t = 0; t < horizon; ++t) avail[t] = (t % 24 >= 7 && t % 24 <= 18) ? 0.8 : 0.0;
    pv.availability = series(std::move(avail), Unit::per_unit);
    pv.capex_per_mw = 1'313'000.0;
    pv.opex_per_mwh = 8.7;
    cfg.renewables.push_back(std::move(pv));
    cfg.alpha = 0.2;
    return cfg;
}

} // namespace ressize::testing
