#include <catch2/catch_amalgamated.hpp>

#include "ressize/solar_thermal.hpp"
#include "test_util.hpp"

using namespace ressize;
using namespace ressize::testing;

TEST_CASE("incidence_factor spot values") {
    CHECK(incidence_factor(0.0) == 1.0);
    CHECK_THAT(incidence_factor(30.0), Catch::Matchers::WithinAbs(0.938339, 1e-6));
    CHECK_THAT(incidence_factor(60.0), Catch::Matchers::WithinAbs(0.6568, 1e-4));
}

TEST_CASE("incidence_factor domain and clamping") {
    CHECK_THROWS_AS(incidence_factor(90.0), DomainError);
    CHECK_THROWS_AS(incidence_factor(95.0), DomainError);
    CHECK_THROWS_AS(incidence_factor(-1.0), DomainError);
    CHECK(incidence_factor(89.9) == 0.0);  // correction exceeds 1, clamped
}

TEST_CASE("incidence_factor strictly decreasing until the zero clamp") {
    // the clamp engages near 75.2°; below it the factor strictly decreases
    double prev = incidence_factor(0.0);
    for (double theta = 0.5; theta <= 75.0; theta += 0.5) {
        double k = incidence_factor(theta);
        CHECK(k < prev);
        prev = k;
    }
    for (double theta = 75.5; theta <= 80.0; theta += 0.5) {
        double k = incidence_factor(theta);
        CHECK(k <= prev);
        prev = k;
    }
}

namespace {

SolarThermalPlant trough(double r = 1.0, double eta_o = 1.0, double eta_ef = 1.0) {
    SolarThermalPlant p;
    p.name = "st";
    p.field_ratio_m2_per_kwe = r;
    p.eta_optical_peak = eta_o;
    p.eta_factor = eta_ef;
    p.eta_thermoelectric = 0.38;
    p.storage_hours = 7.5;
    p.capex_per_mw = 7'221'000.0;
    return p;
}

} // namespace

TEST_CASE("thermal_absorption_cap is the product of factors") {
    CHECK(thermal_absorption_cap(0.0, trough(), 1.0) == 0.0);
    CHECK(thermal_absorption_cap(1.0, trough(), 1.0) == 1.0);
    // 0.8 · 1.2 · 0.75 · 0.9 · 0.9383 computed directly
    CHECK_THAT(thermal_absorption_cap(0.8, trough(1.2, 0.75, 0.9), 0.9383),
               Catch::Matchers::WithinAbs(0.6080184, 1e-8));
}

TEST_CASE("thermal_absorption_cap is linear in irradiance and in K") {
    auto p = trough(1.7, 0.8, 0.93);
    for (double i : {0.1, 0.5, 0.9})
        for (double k : {0.2, 0.7, 1.0}) {
            CHECK_THAT(thermal_absorption_cap(2 * i, p, k),
                       Catch::Matchers::WithinRel(2 * thermal_absorption_cap(i, p, k), 1e-12));
            CHECK_THAT(thermal_absorption_cap(i, p, 2 * k),
                       Catch::Matchers::WithinRel(2 * thermal_absorption_cap(i, p, k), 1e-12));
        }
}

TEST_CASE("build_thermal_profile composes the two operations") {
    SECTION("all-zero irradiance") {
        auto p = trough();
        p.irradiance = constant_series(5, 0.0, Unit::kw_per_m2);
        auto prof = build_thermal_profile(p);
        for (double v : prof.max_thermal) CHECK(v == 0.0);
    }
    SECTION("identity case") {
        auto p = trough();
        p.irradiance = constant_series(4, 1.0, Unit::kw_per_m2);
        p.incidence_angle = constant_series(4, 0.0, Unit::degrees);
        auto prof = build_thermal_profile(p);
        REQUIRE(prof.max_thermal.size() == 4);
        for (double v : prof.max_thermal) CHECK(v == 1.0);
        CHECK_FALSE(prof.assumed_unit_incidence);
    }
    SECTION("three-step evaluation") {
        auto p = trough();
        p.irradiance = series({0.0, 1.0, 0.5}, Unit::kw_per_m2);
        p.incidence_angle = series({0.0, 30.0, 60.0}, Unit::degrees);
        auto prof = build_thermal_profile(p);
        CHECK(prof.max_thermal[0] == 0.0);
        CHECK_THAT(prof.max_thermal[1], Catch::Matchers::WithinAbs(0.938339, 1e-5));
        CHECK_THAT(prof.max_thermal[2], Catch::Matchers::WithinAbs(0.32840, 1e-5));
    }
    SECTION("missing angle series means K = 1, flagged") {
        auto p = trough();
        p.irradiance = series({0.5, 0.7}, Unit::kw_per_m2);
        auto prof = build_thermal_profile(p);
        CHECK(prof.assumed_unit_incidence);
        CHECK_THAT(prof.max_thermal[0], Catch::Matchers::WithinRel(0.5, 1e-12));
    }
    SECTION("night steps skip the angle entirely") {
        auto p = trough();
        p.irradiance = series({0.0, 0.4}, Unit::kw_per_m2);
        p.incidence_angle = series({90.0, 20.0}, Unit::degrees);  // 90° only at night
        auto prof = build_thermal_profile(p);
        CHECK(prof.max_thermal[0] == 0.0);
        CHECK(prof.max_thermal[1] > 0.0);
    }
    SECTION("daytime 90 degrees propagates DomainError") {
        auto p = trough();
        p.irradiance = series({0.4}, Unit::kw_per_m2);
        p.incidence_angle = series({90.0}, Unit::degrees);
        CHECK_THROWS_AS(build_thermal_profile(p), DomainError);
    }
}

TEST_CASE("profile equals pointwise composition (metamorphic)") {
    auto p = trough(1.3, 0.77, 0.91);
    std::vector<double> irr, ang;
    for (int t = 0; t < 48; ++t) {
        double day = std::max(0.0, std::sin((t % 24 - 6) * std::numbers::pi / 12.0));
        irr.push_back(0.9 * day);
        ang.push_back(day > 0 ? 60.0 * std::abs((t % 24) - 12.5) / 6.5 : 0.0);
    }
    for (auto& a : ang) a = std::min(a, 89.0);
    p.irradiance = series(irr, Unit::kw_per_m2);
    p.incidence_angle = series(ang, Unit::degrees);
    auto prof = build_thermal_profile(p);
    for (std::size_t t = 0; t < irr.size(); ++t) {
        double expected = irr[t] == 0.0 ? 0.0 : thermal_absorption_cap(irr[t], p, incidence_factor(ang[t]));
        CHECK_THAT(prof.max_thermal[t], Catch::Matchers::WithinAbs(expected, 1e-15));
    }
}
