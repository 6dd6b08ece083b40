#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ressize/errors.hpp"
#include "ressize/formulation.hpp"
#include "ressize/scenario.hpp"
#include "ressize/timeseries.hpp"

namespace ressize {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// CSV numbers carry 12 significant digits so a write/read cycle stays
// within 1e-9 relative of the original value.
inline std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// --- time-series CSV ------------------------------------------------------

// Header `timestamp,value`; ISO-8601 UTC timestamps, strictly increasing
// with a uniform step. Malformed input is rejected, never repaired.
inline TimeSeries read_timeseries_csv(const fs::path& path, Unit expected_unit) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;

    auto fail = [&](const char* what) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + what);
    };

    if (!std::getline(in, line)) fail("empty file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,value") fail("expected header 'timestamp,value'");

    TimeSeries ts;
    ts.unit = expected_unit;
    UtcTime prev{};
    std::chrono::seconds step{0};
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) fail("blank line");
        auto comma = line.find(',');
        if (comma == std::string::npos) fail("missing comma");
        UtcTime stamp;
        try {
            stamp = parse_utc(std::string_view(line).substr(0, comma));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        const char* num = line.c_str() + comma + 1;
        char* end = nullptr;
        double v = std::strtod(num, &end);
        if (end == num || *end != '\0') fail("malformed value");

        if (ts.values.empty()) {
            ts.start = stamp;
        } else {
            auto delta = std::chrono::duration_cast<std::chrono::seconds>(stamp - prev);
            if (delta.count() <= 0)
                throw GapError(path.string() + ":" + std::to_string(lineno) + ": timestamps not strictly increasing");
            if (step.count() == 0)
                step = delta;
            else if (delta != step)
                throw GapError(path.string() + ":" + std::to_string(lineno) + ": non-uniform step (" +
                               std::to_string(delta.count()) + "s vs " + std::to_string(step.count()) + "s)");
        }
        if (expected_unit == Unit::per_unit && (v < 0.0 || v > 1.0))
            throw RangeError(path.string() + ":" + std::to_string(lineno) + ": per-unit value " +
                             format_csv_number(v) + " out of [0,1]");
        if (expected_unit == Unit::degrees && (v < 0.0 || v > 90.0))
            throw RangeError(path.string() + ":" + std::to_string(lineno) + ": angle " + format_csv_number(v) +
                             " out of [0,90]");
        prev = stamp;
        ts.values.push_back(v);
    }
    if (ts.values.empty()) {
        lineno = 1;
        fail("no data rows");
    }
    if (step.count() > 0) ts.step = step;
    check_series(ts, path.string());
    return ts;
}

inline void write_timeseries_csv(const TimeSeries& ts, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "timestamp,value\n";
    for (std::size_t t = 0; t < ts.size(); ++t)
        out << format_utc(ts.timestamp(t)) << "," << format_csv_number(ts.values[t]) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

// --- resampling ------------------------------------------------------------

enum class ResampleMode { mean, decimate };

// Widens the cadence by an integer factor. Mean mode preserves the energy
// Σ value·step; a trailing remainder is dropped with a warning.
inline TimeSeries resample(const TimeSeries& ts, std::size_t factor, ResampleMode mode) {
    if (factor == 0) throw DomainError("resample factor must be positive");
    if (factor == 1) return ts;
    TimeSeries out;
    out.start = ts.start;
    out.step = ts.step * std::int64_t(factor);
    out.unit = ts.unit;
    std::size_t whole = ts.size() / factor;
    if (whole * factor != ts.size())
        std::cerr << "resample: dropping " << ts.size() - whole * factor << " trailing values\n";
    out.values.reserve(whole);
    for (std::size_t g = 0; g < whole; ++g) {
        if (mode == ResampleMode::decimate) {
            out.values.push_back(ts.values[g * factor]);
        } else {
            double s = 0.0;
            for (std::size_t i = 0; i < factor; ++i) s += ts.values[g * factor + i];
            out.values.push_back(s / double(factor));
        }
    }
    return out;
}

inline ScenarioConfig resample_scenario(ScenarioConfig cfg, std::size_t factor, ResampleMode mode = ResampleMode::mean) {
    cfg.demand = resample(cfg.demand, factor, mode);
    for (auto& p : cfg.renewables) p.availability = resample(p.availability, factor, mode);
    for (auto& p : cfg.solar_thermal) {
        p.irradiance = resample(p.irradiance, factor, mode);
        if (p.incidence_angle) p.incidence_angle = resample(*p.incidence_angle, factor, mode);
    }
    return cfg;
}

// --- scenario JSON ----------------------------------------------------------

// Parsed scenario plus the series-file references needed to write it back.
struct ScenarioDocument {
    ScenarioConfig config;
    std::string demand_csv;
    std::map<std::string, std::string> series_csv;  // plant name (+ ":incidence") -> path
};

namespace detail {

inline void reject_unknown_keys(const ordered_json& obj, std::initializer_list<const char*> known,
                                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError(where + "/" + it.key() + " unknown key");
    }
}

template <class T>
T get_field(const ordered_json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + "/" + key + " missing");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "/" + key + " has the wrong type");
    }
}

template <class T>
T get_field_or(const ordered_json& obj, const char* key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "/" + key + " has the wrong type");
    }
}

} // namespace detail

inline ScenarioDocument read_scenario_document(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    using detail::get_field;
    using detail::get_field_or;
    const fs::path base = path.parent_path();
    auto series_of = [&](const std::string& rel, Unit unit) {
        return read_timeseries_csv(base / rel, unit);
    };

    ScenarioDocument doc;
    ScenarioConfig& cfg = doc.config;
    detail::reject_unknown_keys(j, {"name", "alpha", "demand_csv", "conventional", "renewables", "hydro",
                                    "solar_thermal", "options", "bus_allocation"}, "");
    cfg.name = get_field_or<std::string>(j, "name", "", path.stem().string());
    cfg.alpha = get_field<double>(j, "alpha", "");
    doc.demand_csv = get_field<std::string>(j, "demand_csv", "");
    cfg.demand = series_of(doc.demand_csv, Unit::mw);

    if (j.contains("conventional")) {
        std::size_t i = 0;
        for (const auto& pj : j.at("conventional")) {
            std::string where = "/conventional/" + std::to_string(i++);
            detail::reject_unknown_keys(pj, {"name", "capacity_mw", "opex_per_mwh"}, where);
            ConventionalPlant p;
            p.name = get_field<std::string>(pj, "name", where);
            p.installed_capacity_mw = get_field<double>(pj, "capacity_mw", where);
            p.opex_per_mwh = get_field<double>(pj, "opex_per_mwh", where);
            cfg.conventional.push_back(std::move(p));
        }
    }
    if (j.contains("renewables")) {
        std::size_t i = 0;
        for (const auto& pj : j.at("renewables")) {
            std::string where = "/renewables/" + std::to_string(i++);
            detail::reject_unknown_keys(
                pj, {"name", "technology", "availability_csv", "capex_per_mw", "opex_per_mwh", "fixed_capacity_mw"},
                where);
            VariableRenewablePlant p;
            p.name = get_field<std::string>(pj, "name", where);
            auto tech = get_field<std::string>(pj, "technology", where);
            if (tech == "pv")
                p.technology = RenewableTech::pv;
            else if (tech == "wind")
                p.technology = RenewableTech::wind;
            else
                throw ConfigError(where + "/technology must be 'pv' or 'wind'");
            auto csv = get_field<std::string>(pj, "availability_csv", where);
            doc.series_csv[p.name] = csv;
            p.availability = series_of(csv, Unit::per_unit);
            p.capex_per_mw = get_field<double>(pj, "capex_per_mw", where);
            p.opex_per_mwh = get_field<double>(pj, "opex_per_mwh", where);
            if (pj.contains("fixed_capacity_mw")) p.fixed_capacity_mw = get_field<double>(pj, "fixed_capacity_mw", where);
            cfg.renewables.push_back(std::move(p));
        }
    }
    if (j.contains("hydro")) {
        std::size_t i = 0;
        for (const auto& pj : j.at("hydro")) {
            std::string where = "/hydro/" + std::to_string(i++);
            detail::reject_unknown_keys(pj,
                                        {"name", "fixed_capacity_mw", "storage_hours", "eta_pump", "eta_turbine",
                                         "initial_fill", "capex_per_mw", "opex_per_mwh"},
                                        where);
            PumpedStoragePlant p;
            p.name = get_field<std::string>(pj, "name", where);
            if (pj.contains("fixed_capacity_mw")) p.fixed_capacity_mw = get_field<double>(pj, "fixed_capacity_mw", where);
            p.storage_hours = get_field<double>(pj, "storage_hours", where);
            p.eta_pump = get_field<double>(pj, "eta_pump", where);
            p.eta_turbine = get_field<double>(pj, "eta_turbine", where);
            p.initial_fill = get_field_or<double>(pj, "initial_fill", where, 0.5);
            p.capex_per_mw = get_field_or<double>(pj, "capex_per_mw", where, 0.0);
            p.opex_per_mwh = get_field<double>(pj, "opex_per_mwh", where);
            cfg.hydro.push_back(std::move(p));
        }
    }
    if (j.contains("solar_thermal")) {
        std::size_t i = 0;
        for (const auto& pj : j.at("solar_thermal")) {
            std::string where = "/solar_thermal/" + std::to_string(i++);
            detail::reject_unknown_keys(pj,
                                        {"name", "irradiance_csv", "incidence_angle_csv", "field_ratio_m2_per_kwe",
                                         "eta_optical_peak", "eta_factor", "eta_thermoelectric", "storage_hours",
                                         "initial_fill", "fixed_capacity_mw", "capex_per_mw", "opex_per_mwh"},
                                        where);
            SolarThermalPlant p;
            p.name = get_field<std::string>(pj, "name", where);
            auto csv = get_field<std::string>(pj, "irradiance_csv", where);
            doc.series_csv[p.name] = csv;
            p.irradiance = series_of(csv, Unit::kw_per_m2);
            if (pj.contains("incidence_angle_csv")) {
                auto icsv = get_field<std::string>(pj, "incidence_angle_csv", where);
                doc.series_csv[p.name + ":incidence"] = icsv;
                p.incidence_angle = series_of(icsv, Unit::degrees);
            }
            p.field_ratio_m2_per_kwe = get_field<double>(pj, "field_ratio_m2_per_kwe", where);
            p.eta_optical_peak = get_field<double>(pj, "eta_optical_peak", where);
            p.eta_factor = get_field<double>(pj, "eta_factor", where);
            p.eta_thermoelectric = get_field<double>(pj, "eta_thermoelectric", where);
            p.storage_hours = get_field<double>(pj, "storage_hours", where);
            p.initial_fill = get_field_or<double>(pj, "initial_fill", where, 0.5);
            if (pj.contains("fixed_capacity_mw")) p.fixed_capacity_mw = get_field<double>(pj, "fixed_capacity_mw", where);
            p.capex_per_mw = get_field<double>(pj, "capex_per_mw", where);
            p.opex_per_mwh = get_field<double>(pj, "opex_per_mwh", where);
            cfg.solar_thermal.push_back(std::move(p));
        }
    }
    if (j.contains("options")) {
        const auto& oj = j.at("options");
        detail::reject_unknown_keys(oj, {"capex_annualization", "enforce_cyclic_storage"}, "/options");
        cfg.capex_annualization = detail::get_field_or<double>(oj, "capex_annualization", "/options", 1.0);
        cfg.enforce_cyclic_storage = detail::get_field_or<bool>(oj, "enforce_cyclic_storage", "/options", true);
    }
    if (j.contains("bus_allocation")) {
        for (auto it = j.at("bus_allocation").begin(); it != j.at("bus_allocation").end(); ++it) {
            std::vector<BusShare> shares;
            for (const auto& sj : it.value()) {
                std::string where = "/bus_allocation/" + it.key();
                detail::reject_unknown_keys(sj, {"bus", "weight"}, where);
                shares.push_back({detail::get_field<std::string>(sj, "bus", where),
                                  detail::get_field<double>(sj, "weight", where)});
            }
            cfg.bus_allocation[it.key()] = std::move(shares);
        }
    }
    return doc;
}

inline ScenarioConfig read_scenario(const fs::path& path) { return read_scenario_document(path).config; }

// Canonical JSON for a scenario document: fixed key order, defaults filled
// in, independent of the formatting of the file it was read from.
inline ordered_json scenario_to_json(const ScenarioDocument& doc) {
    const ScenarioConfig& cfg = doc.config;
    ordered_json j;
    j["name"] = cfg.name;
    j["alpha"] = cfg.alpha;
    j["demand_csv"] = doc.demand_csv;
    j["conventional"] = ordered_json::array();
    for (const auto& p : cfg.conventional)
        j["conventional"].push_back(
            {{"name", p.name}, {"capacity_mw", p.installed_capacity_mw}, {"opex_per_mwh", p.opex_per_mwh}});
    j["renewables"] = ordered_json::array();
    for (const auto& p : cfg.renewables) {
        ordered_json pj{{"name", p.name},
                        {"technology", tech_name(p.technology)},
                        {"availability_csv", doc.series_csv.at(p.name)},
                        {"capex_per_mw", p.capex_per_mw},
                        {"opex_per_mwh", p.opex_per_mwh}};
        if (p.fixed_capacity_mw) pj["fixed_capacity_mw"] = *p.fixed_capacity_mw;
        j["renewables"].push_back(std::move(pj));
    }
    j["hydro"] = ordered_json::array();
    for (const auto& p : cfg.hydro) {
        ordered_json pj{{"name", p.name}};
        if (p.fixed_capacity_mw) pj["fixed_capacity_mw"] = *p.fixed_capacity_mw;
        pj["storage_hours"] = p.storage_hours;
        pj["eta_pump"] = p.eta_pump;
        pj["eta_turbine"] = p.eta_turbine;
        pj["initial_fill"] = p.initial_fill;
        pj["capex_per_mw"] = p.capex_per_mw;
        pj["opex_per_mwh"] = p.opex_per_mwh;
        j["hydro"].push_back(std::move(pj));
    }
    j["solar_thermal"] = ordered_json::array();
    for (const auto& p : cfg.solar_thermal) {
        ordered_json pj{{"name", p.name}, {"irradiance_csv", doc.series_csv.at(p.name)}};
        if (p.incidence_angle) pj["incidence_angle_csv"] = doc.series_csv.at(p.name + ":incidence");
        pj["field_ratio_m2_per_kwe"] = p.field_ratio_m2_per_kwe;
        pj["eta_optical_peak"] = p.eta_optical_peak;
        pj["eta_factor"] = p.eta_factor;
        pj["eta_thermoelectric"] = p.eta_thermoelectric;
        pj["storage_hours"] = p.storage_hours;
        pj["initial_fill"] = p.initial_fill;
        if (p.fixed_capacity_mw) pj["fixed_capacity_mw"] = *p.fixed_capacity_mw;
        pj["capex_per_mw"] = p.capex_per_mw;
        pj["opex_per_mwh"] = p.opex_per_mwh;
        j["solar_thermal"].push_back(std::move(pj));
    }
    j["options"] = {{"capex_annualization", cfg.capex_annualization},
                    {"enforce_cyclic_storage", cfg.enforce_cyclic_storage}};
    if (!cfg.bus_allocation.empty()) {
        ordered_json bj;
        for (const auto& [plant, shares] : cfg.bus_allocation) {
            ordered_json arr = ordered_json::array();
            for (const auto& s : shares) arr.push_back({{"bus", s.bus}, {"weight", s.weight}});
            bj[plant] = std::move(arr);
        }
        j["bus_allocation"] = std::move(bj);
    }
    return j;
}

inline void write_scenario(const ScenarioDocument& doc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << scenario_to_json(doc).dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

// --- results ----------------------------------------------------------------

inline ordered_json sizing_to_json(const SizingResult& r) {
    ordered_json j;
    j["status"] = status_name(r.status);
    j["achieved_share"] = r.achieved_share;
    j["cost"] = {{"opex_conventional", r.cost.opex_conventional},
                 {"capex_renewable", r.cost.capex_renewable},
                 {"opex_renewable", r.cost.opex_renewable},
                 {"total", r.cost.total}};
    j["capacities_mw"] = ordered_json::object();
    for (const auto& [name, mw] : r.capacities) j["capacities_mw"][name] = mw;
    j["technology"] = ordered_json::object();
    for (const auto& [name, tech] : r.technology) j["technology"][name] = tech;
    j["solver"] = {{"iterations", r.stats.iterations},
                   {"max_primal_residual", r.stats.max_primal_residual},
                   {"min_reduced_cost", r.stats.min_reduced_cost}};
    j["notes"] = r.notes;
    return j;
}

// sizing.json always; dispatch.csv and curtailment.csv only for optimal
// results. Dispatch columns: plant generation under the plant name, pumping
// as `<name>.pump`, storage as `<name>.soc`, absorbed heat as `<name>.absorb`.
inline void write_results(const SizingResult& r, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    {
        std::ofstream out(dir / "sizing.json");
        if (!out) throw IoError("cannot write " + (dir / "sizing.json").string());
        out << sizing_to_json(r).dump(2) << "\n";
    }
    if (r.status != SolveStatus::optimal) return;

    const Dispatch& d = r.dispatch;
    {
        std::ofstream out(dir / "dispatch.csv");
        if (!out) throw IoError("cannot write " + (dir / "dispatch.csv").string());
        out << "timestamp";
        for (const auto& p : d.conventional) out << "," << p.name;
        for (const auto& p : d.renewable) out << "," << p.name;
        for (const auto& p : d.hydro) out << "," << p.name << "," << p.name << ".pump," << p.name << ".soc";
        for (const auto& p : d.solar_thermal)
            out << "," << p.name << "," << p.name << ".absorb," << p.name << ".soc";
        out << "\n";
        for (std::size_t t = 0; t < d.horizon(); ++t) {
            out << format_utc(d.start + d.step * std::int64_t(t));
            for (const auto& p : d.conventional) out << "," << format_csv_number(p.generation[t]);
            for (const auto& p : d.renewable) out << "," << format_csv_number(p.generation[t]);
            for (const auto& p : d.hydro)
                out << "," << format_csv_number(p.generation[t]) << "," << format_csv_number(p.pumping[t]) << ","
                    << format_csv_number(p.storage_level[t]);
            for (const auto& p : d.solar_thermal)
                out << "," << format_csv_number(p.generation[t]) << "," << format_csv_number(p.absorption[t]) << ","
                    << format_csv_number(p.storage_level[t]);
            out << "\n";
        }
    }
    {
        std::ofstream out(dir / "curtailment.csv");
        if (!out) throw IoError("cannot write " + (dir / "curtailment.csv").string());
        out << "timestamp";
        for (const auto& [name, series] : r.curtailment) out << "," << name;
        out << "\n";
        for (std::size_t t = 0; t < d.horizon(); ++t) {
            out << format_utc(d.start + d.step * std::int64_t(t));
            for (const auto& [name, series] : r.curtailment) out << "," << format_csv_number(series[t]);
            out << "\n";
        }
    }
}

// Rebuilds a Dispatch from dispatch.csv. Technology classification (pv vs
// wind vs conventional) comes from the sizing.json map.
inline Dispatch read_dispatch_csv(const fs::path& path, const std::map<std::string, std::string>& technology) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ":1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> headers;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) headers.push_back(tok);
    }
    if (headers.empty() || headers[0] != "timestamp")
        throw ParseError(path.string() + ":1: expected 'timestamp' first column");

    std::vector<std::vector<double>> cols(headers.size());
    std::vector<std::string> stamps;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::size_t c = 0;
        while (std::getline(ss, tok, ',')) {
            if (c >= headers.size()) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": extra column");
            if (c == 0) {
                stamps.push_back(tok);
            } else {
                char* end = nullptr;
                double v = std::strtod(tok.c_str(), &end);
                if (end == tok.c_str() || *end != '\0')
                    throw ParseError(path.string() + ":" + std::to_string(lineno) + ": malformed value");
                cols[c].push_back(v);
            }
            ++c;
        }
        if (c != headers.size()) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": missing column");
    }

    Dispatch d;
    if (!stamps.empty()) {
        d.start = parse_utc(stamps[0]);
        if (stamps.size() > 1)
            d.step = std::chrono::duration_cast<std::chrono::seconds>(parse_utc(stamps[1]) - d.start);
    }

    std::map<std::string, std::size_t> col_of;
    for (std::size_t c = 1; c < headers.size(); ++c) col_of[headers[c]] = c;
    for (std::size_t c = 1; c < headers.size(); ++c) {
        const std::string& h = headers[c];
        if (h.find('.') != std::string::npos) continue;  // suffixed columns handled with their plant
        auto it = technology.find(h);
        std::string tech = it != technology.end() ? it->second : "conventional";
        if (tech == "hydro") {
            Dispatch::Hydro hp;
            hp.name = h;
            hp.generation = cols[c];
            hp.pumping = cols.at(col_of.at(h + ".pump"));
            hp.storage_level = cols.at(col_of.at(h + ".soc"));
            d.hydro.push_back(std::move(hp));
        } else if (tech == "solar_thermal") {
            Dispatch::SolarThermal sp;
            sp.name = h;
            sp.generation = cols[c];
            sp.absorption = cols.at(col_of.at(h + ".absorb"));
            sp.storage_level = cols.at(col_of.at(h + ".soc"));
            d.solar_thermal.push_back(std::move(sp));
        } else if (tech == "pv" || tech == "wind") {
            d.renewable.push_back({h, cols[c], tech});
        } else {
            d.conventional.push_back({h, cols[c]});
        }
    }
    return d;
}

} // namespace ressize
