#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "ressize/errors.hpp"
#include "ressize/scenario.hpp"

namespace ressize {

// Time-varying upper bound on absorbed thermal power, in MW-thermal per
// MW-electric installed. The LP multiplies it by the plant's capacity.
struct ThermalProfile {
    std::vector<double> max_thermal;
    bool assumed_unit_incidence = false;  // true when no angle series was given
};

// Incidence-angle derating of parabolic-trough absorption. θ in degrees,
// both in the polynomial and in the cosine. Clamped at 0 for large angles.
inline double incidence_factor(double theta_deg) {
    if (theta_deg < 0.0 || theta_deg >= 90.0)
        throw DomainError("incidence angle " + std::to_string(theta_deg) + " outside [0,90)");
    double poly = 7e-4 * theta_deg + 36e-6 * theta_deg * theta_deg;
    double k = 1.0 - poly / std::cos(theta_deg * std::numbers::pi / 180.0);
    return k < 0.0 ? 0.0 : k;
}

// Per-unit-capacity absorption bound: i · r · η_O · η_Ef · K. With i in
// kW/m² and r in m²/kWe the product is dimensionless (MW-th per MW-e).
inline double thermal_absorption_cap(double irradiance_kw_m2, const SolarThermalPlant& plant, double k_factor) {
    return irradiance_kw_m2 * plant.field_ratio_m2_per_kwe * plant.eta_optical_peak * plant.eta_factor * k_factor;
}

// Element-wise composition of the two functions above over the horizon.
// Night steps (zero irradiance) map to zero without consulting the angle.
inline ThermalProfile build_thermal_profile(const SolarThermalPlant& plant) {
    ThermalProfile profile;
    profile.assumed_unit_incidence = !plant.incidence_angle.has_value();
    profile.max_thermal.reserve(plant.irradiance.size());
    for (std::size_t t = 0; t < plant.irradiance.size(); ++t) {
        double i = plant.irradiance.values[t];
        if (i == 0.0) {
            profile.max_thermal.push_back(0.0);
            continue;
        }
        double k = plant.incidence_angle ? incidence_factor(plant.incidence_angle->values[t]) : 1.0;
        profile.max_thermal.push_back(thermal_absorption_cap(i, plant, k));
    }
    return profile;
}

} // namespace ressize
