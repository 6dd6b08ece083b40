#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ressize/errors.hpp"
#include "ressize/timeseries.hpp"

namespace ressize {

// Already-installed thermal plant. Capacity is never a decision variable
// and no CAPEX is charged.
struct ConventionalPlant {
    std::string name;
    double installed_capacity_mw = 0.0;
    double opex_per_mwh = 0.0;
};

enum class RenewableTech { pv, wind };

inline const char* tech_name(RenewableTech t) { return t == RenewableTech::pv ? "pv" : "wind"; }

// PV or wind. Output is bounded by availability × capacity at each step.
// A set fixed_capacity removes the capacity from the decision vector and
// drops its CAPEX from the objective.
struct VariableRenewablePlant {
    std::string name;
    RenewableTech technology = RenewableTech::pv;
    TimeSeries availability;            // per-unit
    double capex_per_mw = 0.0;
    double opex_per_mwh = 0.0;
    std::optional<double> fixed_capacity_mw;
};

// Pumped-storage hydro: one rated power for pumping and turbining, a
// reservoir of storage_hours × rated power, and separate efficiencies.
struct PumpedStoragePlant {
    std::string name;
    std::optional<double> fixed_capacity_mw;
    double storage_hours = 0.0;
    double eta_pump = 1.0;
    double eta_turbine = 1.0;
    double initial_fill = 0.5;          // fraction of reservoir capacity
    double capex_per_mw = 0.0;
    double opex_per_mwh = 0.0;          // per MWh generated
};

// Parabolic-trough plant with a thermal tank of storage_hours × rated
// electric power. Absorption is bounded by irradiance, optics and the
// incidence-angle factor; a missing incidence series means the factor is
// taken as 1 (optimistic) and flagged in outputs.
struct SolarThermalPlant {
    std::string name;
    std::optional<double> fixed_capacity_mw;
    TimeSeries irradiance;              // kW/m²
    std::optional<TimeSeries> incidence_angle;  // degrees
    double field_ratio_m2_per_kwe = 0.0;
    double eta_optical_peak = 1.0;
    double eta_factor = 1.0;
    double eta_thermoelectric = 1.0;
    double storage_hours = 0.0;
    double initial_fill = 0.5;
    double capex_per_mw = 0.0;
    double opex_per_mwh = 0.0;
};

struct BusShare {
    std::string bus;
    double weight = 0.0;
};

struct ScenarioConfig {
    std::string name;
    TimeSeries demand;                  // MW
    std::vector<ConventionalPlant> conventional;
    std::vector<VariableRenewablePlant> renewables;
    std::vector<PumpedStoragePlant> hydro;
    std::vector<SolarThermalPlant> solar_thermal;
    double alpha = 0.0;                 // minimum annual renewable share
    double capex_annualization = 1.0;   // 1.0 = raw CAPEX against one year of OPEX
    bool enforce_cyclic_storage = true;
    std::map<std::string, std::vector<BusShare>> bus_allocation;
};

// Per-plant dispatch trajectories plus the sized capacities. Series are
// grouped by plant kind so share/cost evaluation needs no extra metadata.
struct Dispatch {
    struct Conventional {
        std::string name;
        std::vector<double> generation;
    };
    struct Renewable {
        std::string name;
        std::vector<double> generation;
        std::string technology;  // "pv" or "wind", for reporting
    };
    struct Hydro {
        std::string name;
        std::vector<double> generation;
        std::vector<double> pumping;
        std::vector<double> storage_level;  // MWh at the start of each step
    };
    struct SolarThermal {
        std::string name;
        std::vector<double> generation;     // electric MW
        std::vector<double> absorption;     // thermal MW
        std::vector<double> storage_level;  // MWh-thermal
    };

    UtcTime start{};
    std::chrono::seconds step{3600};
    std::vector<Conventional> conventional;
    std::vector<Renewable> renewable;
    std::vector<Hydro> hydro;
    std::vector<SolarThermal> solar_thermal;
    std::map<std::string, double> capacities;  // MW, every plant

    double step_hours() const { return double(step.count()) / 3600.0; }
    std::size_t horizon() const {
        if (!conventional.empty()) return conventional.front().generation.size();
        if (!renewable.empty()) return renewable.front().generation.size();
        if (!hydro.empty()) return hydro.front().generation.size();
        if (!solar_thermal.empty()) return solar_thermal.front().generation.size();
        return 0;
    }
};

struct CostBreakdown {
    double opex_conventional = 0.0;
    double capex_renewable = 0.0;
    double opex_renewable = 0.0;
    double total = 0.0;
};

namespace detail {

inline void require(bool ok, const std::string& path, const std::string& reason) {
    if (!ok) throw ConfigError(path + ": " + reason);
}

inline void check_grid(const TimeSeries& ts, const TimeSeries& demand, const std::string& path) {
    require(ts.size() == demand.size(), path,
            "length mismatch (" + std::to_string(ts.size()) + " vs demand " + std::to_string(demand.size()) + ")");
    require(ts.start == demand.start, path, "start differs from demand");
    require(ts.step == demand.step, path, "step differs from demand");
}

} // namespace detail

// A ScenarioConfig with every type invariant checked and the horizon fixed.
class ValidatedScenario {
  public:
    explicit ValidatedScenario(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
        using detail::require;
        const auto& c = cfg_;
        check_series(c.demand, "demand");
        require(c.demand.unit == Unit::mw, "demand", "unit must be MW");
        require(c.alpha >= 0.0 && c.alpha <= 1.0, "alpha",
                "alpha out of range [0,1]: " + std::to_string(c.alpha));
        require(std::isfinite(c.capex_annualization) && c.capex_annualization > 0.0, "options.capex_annualization",
                "must be positive and finite");

        std::set<std::string> names;
        auto unique_name = [&](const std::string& n, const std::string& path) {
            require(!n.empty(), path + ".name", "empty name");
            require(names.insert(n).second, path + ".name", "duplicate plant name '" + n + "'");
        };

        for (std::size_t i = 0; i < c.conventional.size(); ++i) {
            const auto& p = c.conventional[i];
            std::string path = "conventional[" + std::to_string(i) + "]";
            unique_name(p.name, path);
            require(p.installed_capacity_mw >= 0.0, path + ".capacity_mw", "negative capacity");
            require(p.opex_per_mwh >= 0.0, path + ".opex_per_mwh", "negative cost");
        }
        for (std::size_t j = 0; j < c.renewables.size(); ++j) {
            const auto& p = c.renewables[j];
            std::string path = "renewables[" + std::to_string(j) + "]";
            unique_name(p.name, path);
            require(p.capex_per_mw >= 0.0, path + ".capex_per_mw", "negative cost");
            require(p.opex_per_mwh >= 0.0, path + ".opex_per_mwh", "negative cost");
            require(p.availability.unit == Unit::per_unit, path + ".availability", "unit must be per_unit");
            check_series(p.availability, path + ".availability");
            detail::check_grid(p.availability, c.demand, path + ".availability");
            if (p.fixed_capacity_mw)
                require(*p.fixed_capacity_mw >= 0.0, path + ".fixed_capacity_mw", "negative capacity");
        }
        for (std::size_t k = 0; k < c.hydro.size(); ++k) {
            const auto& p = c.hydro[k];
            std::string path = "hydro[" + std::to_string(k) + "]";
            unique_name(p.name, path);
            require(p.eta_pump > 0.0 && p.eta_pump <= 1.0, path + ".eta_pump", "efficiency out of (0,1]");
            require(p.eta_turbine > 0.0 && p.eta_turbine <= 1.0, path + ".eta_turbine", "efficiency out of (0,1]");
            require(p.storage_hours > 0.0, path + ".storage_hours", "must be positive");
            require(p.initial_fill >= 0.0 && p.initial_fill <= 1.0, path + ".initial_fill", "out of [0,1]");
            require(p.capex_per_mw >= 0.0, path + ".capex_per_mw", "negative cost");
            require(p.opex_per_mwh >= 0.0, path + ".opex_per_mwh", "negative cost");
            if (p.fixed_capacity_mw)
                require(*p.fixed_capacity_mw >= 0.0, path + ".fixed_capacity_mw", "negative capacity");
        }
        for (std::size_t l = 0; l < c.solar_thermal.size(); ++l) {
            const auto& p = c.solar_thermal[l];
            std::string path = "solar_thermal[" + std::to_string(l) + "]";
            unique_name(p.name, path);
            auto eff = [&](double v, const char* field) {
                require(v > 0.0 && v <= 1.0, path + "." + field, "efficiency out of (0,1]");
            };
            eff(p.eta_optical_peak, "eta_optical_peak");
            eff(p.eta_factor, "eta_factor");
            eff(p.eta_thermoelectric, "eta_thermoelectric");
            require(p.field_ratio_m2_per_kwe > 0.0, path + ".field_ratio_m2_per_kwe", "must be positive");
            require(p.storage_hours > 0.0, path + ".storage_hours", "must be positive");
            require(p.initial_fill >= 0.0 && p.initial_fill <= 1.0, path + ".initial_fill", "out of [0,1]");
            require(p.capex_per_mw >= 0.0, path + ".capex_per_mw", "negative cost");
            require(p.opex_per_mwh >= 0.0, path + ".opex_per_mwh", "negative cost");
            require(p.irradiance.unit == Unit::kw_per_m2, path + ".irradiance", "unit must be kW/m²");
            check_series(p.irradiance, path + ".irradiance");
            detail::check_grid(p.irradiance, c.demand, path + ".irradiance");
            for (double v : p.irradiance.values)
                require(v >= 0.0, path + ".irradiance", "negative irradiance");
            if (p.incidence_angle) {
                require(p.incidence_angle->unit == Unit::degrees, path + ".incidence_angle", "unit must be degrees");
                check_series(*p.incidence_angle, path + ".incidence_angle");
                detail::check_grid(*p.incidence_angle, c.demand, path + ".incidence_angle");
            }
            if (p.fixed_capacity_mw)
                require(*p.fixed_capacity_mw >= 0.0, path + ".fixed_capacity_mw", "negative capacity");
        }
        for (const auto& [plant, shares] : c.bus_allocation) {
            std::string path = "bus_allocation." + plant;
            require(names.count(plant) == 1, path, "unknown plant name");
            double sum = 0.0;
            for (const auto& s : shares) {
                require(s.weight >= 0.0, path, "negative bus weight");
                sum += s.weight;
            }
            require(std::abs(sum - 1.0) <= 1e-9, path, "bus weights sum to " + std::to_string(sum) + ", expected 1");
        }
    }

    const ScenarioConfig& config() const { return cfg_; }
    std::size_t horizon() const { return cfg_.demand.size(); }
    double dt_hours() const { return cfg_.demand.step_hours(); }

  private:
    ScenarioConfig cfg_;
};

inline ValidatedScenario validate_scenario(ScenarioConfig cfg) { return ValidatedScenario(std::move(cfg)); }

// One step of the reservoir balance: level + pump·η_P − gen/η_G, scaled by
// the step length in hours.
inline double storage_step(double level_mwh, double pump_mw, double gen_mw, double eta_pump, double eta_turbine,
                           double dt_hours = 1.0) {
    return level_mwh + (pump_mw * eta_pump - gen_mw / eta_turbine) * dt_hours;
}

// Σ generation(t) − D_t − Σ pumping(t). Zero iff the balance holds at t.
inline double energy_balance_residual(const Dispatch& d, const TimeSeries& demand, std::size_t t) {
    if (t >= demand.size()) throw std::out_of_range("balance index " + std::to_string(t) + " out of horizon");
    double sum = -demand.values[t];
    for (const auto& p : d.conventional) sum += p.generation.at(t);
    for (const auto& p : d.renewable) sum += p.generation.at(t);
    for (const auto& p : d.hydro) sum += p.generation.at(t) - p.pumping.at(t);
    for (const auto& p : d.solar_thermal) sum += p.generation.at(t);
    return sum;
}

// Annual renewable energy share: PV, wind and solar-thermal generation over
// total demand. Hydro and conventional generation are excluded.
inline double renewable_share(const Dispatch& d, const TimeSeries& demand) {
    double total_demand = 0.0;
    for (double v : demand.values) total_demand += v;
    if (total_demand == 0.0) throw DivisionByZero("renewable_share: total demand is zero");
    double ren = 0.0;
    for (const auto& p : d.renewable)
        for (double v : p.generation) ren += v;
    for (const auto& p : d.solar_thermal)
        for (double v : p.generation) ren += v;
    return ren / total_demand;
}

// Annual system cost. CAPEX is charged only on newly sized capacity (plants
// with fixed_capacity contribute none) and multiplied by the annualization
// factor. OPEX is charged per MWh generated.
inline CostBreakdown annual_cost(const Dispatch& d, const ValidatedScenario& s) {
    const auto& cfg = s.config();
    const double dt = d.step_hours();
    CostBreakdown cb;

    auto energy = [&](const std::vector<double>& gen) {
        double e = 0.0;
        for (double v : gen) e += v;
        return e * dt;
    };

    for (const auto& p : cfg.conventional) {
        for (const auto& dp : d.conventional)
            if (dp.name == p.name) cb.opex_conventional += energy(dp.generation) * p.opex_per_mwh;
    }
    for (const auto& p : cfg.renewables) {
        if (!p.fixed_capacity_mw) cb.capex_renewable += d.capacities.at(p.name) * p.capex_per_mw;
        for (const auto& dp : d.renewable)
            if (dp.name == p.name) cb.opex_renewable += energy(dp.generation) * p.opex_per_mwh;
    }
    for (const auto& p : cfg.hydro) {
        if (!p.fixed_capacity_mw) cb.capex_renewable += d.capacities.at(p.name) * p.capex_per_mw;
        for (const auto& dp : d.hydro)
            if (dp.name == p.name) cb.opex_renewable += energy(dp.generation) * p.opex_per_mwh;
    }
    for (const auto& p : cfg.solar_thermal) {
        if (!p.fixed_capacity_mw) cb.capex_renewable += d.capacities.at(p.name) * p.capex_per_mw;
        for (const auto& dp : d.solar_thermal)
            if (dp.name == p.name) cb.opex_renewable += energy(dp.generation) * p.opex_per_mwh;
    }
    cb.capex_renewable *= cfg.capex_annualization;
    cb.total = cb.opex_conventional + cb.capex_renewable + cb.opex_renewable;
    return cb;
}

} // namespace ressize
