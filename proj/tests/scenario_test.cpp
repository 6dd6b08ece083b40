#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ressize/scenario.hpp"
#include "test_util.hpp"

using namespace ressize;
using namespace ressize::testing;

TEST_CASE("validate_scenario rejects mismatched series lengths") {
    auto cfg = two_plant_config(24);
    cfg.renewables[0].availability.values.resize(23);
    REQUIRE_THROWS_MATCHES(validate_scenario(cfg), ConfigError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("length mismatch")));
}

TEST_CASE("validate_scenario rejects alpha out of range") {
    auto cfg = two_plant_config();
    cfg.alpha = 1.5;
    REQUIRE_THROWS_MATCHES(validate_scenario(cfg), ConfigError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("alpha out of range")));
}

TEST_CASE("validate_scenario fixes the horizon") {
    auto s = validate_scenario(two_plant_config(24));
    REQUIRE(s.horizon() == 24);
    REQUIRE(s.dt_hours() == 1.0);
    REQUIRE(s.config().renewables.size() == 1);
}

TEST_CASE("validate_scenario rejects other invariant violations") {
    SECTION("negative opex") {
        auto cfg = two_plant_config();
        cfg.conventional[0].opex_per_mwh = -1.0;
        REQUIRE_THROWS_AS(validate_scenario(cfg), ConfigError);
    }
    SECTION("duplicate plant names") {
        auto cfg = two_plant_config();
        cfg.conventional.push_back({"pv", 10.0, 5.0});
        REQUIRE_THROWS_AS(validate_scenario(cfg), ConfigError);
    }
    SECTION("per-unit availability above one") {
        auto cfg = two_plant_config();
        cfg.renewables[0].availability.values[3] = 1.2;
        REQUIRE_THROWS_AS(validate_scenario(cfg), RangeError);
    }
    SECTION("bus weights must sum to one") {
        auto cfg = two_plant_config();
        cfg.bus_allocation["pv"] = {{"bus1", 0.6}, {"bus2", 0.3}};
        REQUIRE_THROWS_AS(validate_scenario(cfg), ConfigError);
    }
    SECTION("bus allocation must name a known plant") {
        auto cfg = two_plant_config();
        cfg.bus_allocation["nope"] = {{"bus1", 1.0}};
        REQUIRE_THROWS_AS(validate_scenario(cfg), ConfigError);
    }
}

TEST_CASE("storage_step matches hand evaluation") {
    CHECK(storage_step(10, 0, 0, 0.9, 0.9) == 10.0);
    CHECK_THAT(storage_step(10, 2, 0, 0.9, 0.9), Catch::Matchers::WithinAbs(11.8, 1e-12));
    CHECK_THAT(storage_step(10, 0, 1, 0.9, 0.8), Catch::Matchers::WithinAbs(8.75, 1e-12));
}

TEST_CASE("storage_step is linear and monotone") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 10.0), eff(0.1, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        double level = u(rng), pump = u(rng), gen = u(rng);
        double ep = eff(rng), eg = eff(rng);
        double a = u(rng), b = u(rng);
        // linear in (pump, gen)
        double lhs = storage_step(level, a * pump, a * gen, ep, eg) - level;
        double rhs = a * (storage_step(level, pump, gen, ep, eg) - level);
        CHECK_THAT(lhs, Catch::Matchers::WithinRel(rhs, 1e-12) || Catch::Matchers::WithinAbs(rhs, 1e-12));
        // monotone
        CHECK(storage_step(level, pump + b, gen, ep, eg) >= storage_step(level, pump, gen, ep, eg));
        CHECK(storage_step(level, pump, gen + b, ep, eg) <= storage_step(level, pump, gen, ep, eg));
    }
}

namespace {

Dispatch simple_dispatch(std::vector<double> conv, std::vector<double> ren, std::vector<double> hyd_gen = {},
                         std::vector<double> hyd_pump = {}) {
    Dispatch d;
    d.start = parse_utc("2019-01-01T00:00:00Z");
    std::size_t n = conv.size();
    d.conventional.push_back({"coal", std::move(conv)});
    d.renewable.push_back({"pv", std::move(ren)});
    if (!hyd_gen.empty()) {
        Dispatch::Hydro h;
        h.name = "psh";
        h.generation = std::move(hyd_gen);
        h.pumping = std::move(hyd_pump);
        h.storage_level.assign(n, 0.0);
        d.hydro.push_back(std::move(h));
    }
    d.capacities = {{"coal", 10.0}, {"pv", 5.0}};
    return d;
}

} // namespace

TEST_CASE("energy_balance_residual substitutes directly") {
    auto demand = constant_series(4, 5.0);
    SECTION("balanced, no pumping") {
        auto d = simple_dispatch({2, 2, 2, 2}, {3, 3, 3, 3});
        CHECK(energy_balance_residual(d, demand, 0) == 0.0);
    }
    SECTION("balanced with pumping") {
        auto d = simple_dispatch({3, 3, 3, 3}, {2, 2, 2, 2}, {1, 1, 1, 1}, {1, 1, 1, 1});
        CHECK(energy_balance_residual(d, demand, 2) == 0.0);
    }
    SECTION("deficit of one") {
        auto demand6 = constant_series(4, 6.0);
        auto d = simple_dispatch({2, 2, 2, 2}, {3, 3, 3, 3});
        CHECK(energy_balance_residual(d, demand6, 1) == -1.0);
    }
    SECTION("index out of horizon") {
        auto d = simple_dispatch({2, 2, 2, 2}, {3, 3, 3, 3});
        CHECK_THROWS_AS(energy_balance_residual(d, demand, 4), std::out_of_range);
    }
}

TEST_CASE("renewable_share excludes hydro and conventional") {
    SECTION("all renewable") {
        auto d = simple_dispatch({0, 0, 0, 0}, {1, 1, 1, 1});
        CHECK(renewable_share(d, constant_series(4, 1.0)) == 1.0);
    }
    SECTION("half renewable") {
        auto d = simple_dispatch({0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5});
        CHECK(renewable_share(d, constant_series(4, 1.0)) == 0.5);
    }
    SECTION("hydro generation does not count") {
        auto d = simple_dispatch({0, 0, 0, 0}, {1, 1, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0});
        CHECK(renewable_share(d, constant_series(4, 1.0)) == 0.75);
    }
    SECTION("zero demand") {
        auto d = simple_dispatch({0, 0}, {0, 0});
        CHECK_THROWS_AS(renewable_share(d, constant_series(2, 0.0)), DivisionByZero);
    }
}

TEST_CASE("renewable_share is scale invariant") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> conv(6), ren(6), dem(6);
        for (int t = 0; t < 6; ++t) {
            conv[std::size_t(t)] = u(rng);
            ren[std::size_t(t)] = u(rng);
            dem[std::size_t(t)] = conv[std::size_t(t)] + ren[std::size_t(t)];
        }
        double lambda = u(rng);
        auto d1 = simple_dispatch(conv, ren);
        for (auto& v : conv) v *= lambda;
        for (auto& v : ren) v *= lambda;
        auto demand = series(dem);
        auto scaled = dem;
        for (auto& v : scaled) v *= lambda;
        auto d2 = simple_dispatch(conv, ren);
        CHECK_THAT(renewable_share(d2, series(scaled)),
                   Catch::Matchers::WithinRel(renewable_share(d1, demand), 1e-12));
    }
}

TEST_CASE("annual_cost matches the cost functions") {
    auto s = validate_scenario(two_plant_config(24));
    SECTION("zero dispatch, zero new capacity") {
        Dispatch d;
        d.start = s.config().demand.start;
        d.conventional.push_back({"coal", std::vector<double>(24, 0.0)});
        d.renewable.push_back({"pv", std::vector<double>(24, 0.0)});
        d.capacities = {{"coal", 200.0}, {"pv", 0.0}};
        auto cb = annual_cost(d, s);
        CHECK(cb.total == 0.0);
    }
    SECTION("one MW of PV built, no generation") {
        Dispatch d;
        d.start = s.config().demand.start;
        d.conventional.push_back({"coal", std::vector<double>(24, 0.0)});
        d.renewable.push_back({"pv", std::vector<double>(24, 0.0)});
        d.capacities = {{"coal", 200.0}, {"pv", 1.0}};
        auto cb = annual_cost(d, s);
        CHECK_THAT(cb.capex_renewable, Catch::Matchers::WithinAbs(1'313'000.0, 1e-9));
        CHECK_THAT(cb.total, Catch::Matchers::WithinAbs(1'313'000.0, 1e-9));
    }
    SECTION("conventional energy at 40 $/MWh") {
        Dispatch d;
        d.start = s.config().demand.start;
        std::vector<double> gen(24, 0.0);
        gen[0] = 60.0;
        gen[1] = 40.0;  // 100 MWh over two hours
        d.conventional.push_back({"coal", std::move(gen)});
        d.renewable.push_back({"pv", std::vector<double>(24, 0.0)});
        d.capacities = {{"coal", 200.0}, {"pv", 0.0}};
        auto cb = annual_cost(d, s);
        CHECK_THAT(cb.opex_conventional, Catch::Matchers::WithinAbs(4000.0, 1e-9));
        CHECK(cb.capex_renewable == 0.0);
        CHECK_THAT(cb.total, Catch::Matchers::WithinAbs(4000.0, 1e-9));
    }
    SECTION("fixed-capacity plants contribute no CAPEX") {
        auto cfg = two_plant_config(24);
        cfg.renewables[0].fixed_capacity_mw = 50.0;
        auto sf = validate_scenario(cfg);
        Dispatch d;
        d.start = cfg.demand.start;
        d.conventional.push_back({"coal", std::vector<double>(24, 0.0)});
        d.renewable.push_back({"pv", std::vector<double>(24, 0.0)});
        d.capacities = {{"coal", 200.0}, {"pv", 50.0}};
        CHECK(annual_cost(d, sf).capex_renewable == 0.0);
    }
}

TEST_CASE("annual_cost is additive in dispatch") {
    auto s = validate_scenario(two_plant_config(8));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int rep = 0; rep < 30; ++rep) {
        auto mk = [&] {
            Dispatch d;
            d.start = s.config().demand.start;
            std::vector<double> c(8), r(8);
            for (auto& v : c) v = u(rng);
            for (auto& v : r) v = u(rng);
            d.conventional.push_back({"coal", c});
            d.renewable.push_back({"pv", r});
            d.capacities = {{"coal", 200.0}, {"pv", u(rng)}};
            return d;
        };
        auto d1 = mk(), d2 = mk();
        Dispatch sum = d1;
        for (int t = 0; t < 8; ++t) {
            sum.conventional[0].generation[std::size_t(t)] += d2.conventional[0].generation[std::size_t(t)];
            sum.renewable[0].generation[std::size_t(t)] += d2.renewable[0].generation[std::size_t(t)];
        }
        sum.capacities["pv"] = d1.capacities["pv"] + d2.capacities["pv"];
        sum.capacities["coal"] = 200.0;
        double lhs = annual_cost(sum, s).total - annual_cost(d1, s).total - annual_cost(d2, s).total;
        // capacity of coal is fixed, so the shared 200 MW contributes nothing
        CHECK_THAT(lhs, Catch::Matchers::WithinAbs(0.0, 1e-6));
    }
}

TEST_CASE("validate_scenario accepts iff every invariant holds") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int rep = 0; rep < 60; ++rep) {
        auto cfg = two_plant_config(12);
        PumpedStoragePlant h;
        h.name = "psh";
        h.fixed_capacity_mw = 50.0;
        h.storage_hours = 8.0;
        h.eta_pump = 0.85;
        h.eta_turbine = 0.9;
        cfg.hydro.push_back(h);
        cfg.alpha = u01(rng);
        REQUIRE_NOTHROW(validate_scenario(cfg));

        // inject a single violation; validation must reject it
        switch (rep % 6) {
            case 0: cfg.alpha = 1.0 + u01(rng); break;
            case 1: cfg.hydro[0].eta_pump = 1.0 + u01(rng); break;
            case 2: cfg.hydro[0].storage_hours = 0.0; break;
            case 3: cfg.hydro[0].initial_fill = 1.5; break;
            case 4: cfg.renewables[0].capex_per_mw = -1.0; break;
            case 5: cfg.demand.values[5] = std::nan(""); break;
        }
        CHECK_THROWS_AS(validate_scenario(cfg), ConfigError);
    }
}
