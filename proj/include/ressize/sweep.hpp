#pragma once

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "ressize/io.hpp"
#include "ressize/sizing.hpp"

namespace ressize {

struct SweepRow {
    double alpha = 0.0;
    std::string status;
    double total_cost = std::numeric_limits<double>::quiet_NaN();
    double normalized_cost = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> capacity_mw;
    std::map<std::string, double> energy_mwh;  // per technology
    double achieved_share = std::numeric_limits<double>::quiet_NaN();
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::vector<std::string> plant_names;   // capacity column order
    std::vector<std::string> technologies;  // energy column order
};

struct SweepOptions {
    SizingOptions sizing;
    int jobs = 1;  // 1 forces serial execution
};

namespace detail {

inline std::vector<std::string> scenario_plants(const ScenarioConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& p : cfg.conventional) names.push_back(p.name);
    for (const auto& p : cfg.renewables) names.push_back(p.name);
    for (const auto& p : cfg.hydro) names.push_back(p.name);
    for (const auto& p : cfg.solar_thermal) names.push_back(p.name);
    return names;
}

inline std::vector<std::string> scenario_technologies(const ScenarioConfig& cfg) {
    std::vector<std::string> techs;
    auto add = [&](const std::string& t) {
        for (const auto& e : techs)
            if (e == t) return;
        techs.push_back(t);
    };
    if (!cfg.conventional.empty()) add("conventional");
    for (const auto& p : cfg.renewables) add(tech_name(p.technology));
    if (!cfg.hydro.empty()) add("hydro");
    if (!cfg.solar_thermal.empty()) add("solar_thermal");
    return techs;
}

inline std::map<std::string, double> energy_by_technology(const SizingResult& r) {
    std::map<std::string, double> e;
    const double dt = r.dispatch.step_hours();
    auto acc = [&](const std::string& tech, const std::vector<double>& gen) {
        double s = 0.0;
        for (double v : gen) s += v;
        e[tech] += s * dt;
    };
    for (const auto& p : r.dispatch.conventional) acc("conventional", p.generation);
    for (const auto& p : r.dispatch.renewable) acc(p.technology.empty() ? "renewable" : p.technology, p.generation);
    for (const auto& p : r.dispatch.hydro) acc("hydro", p.generation);
    for (const auto& p : r.dispatch.solar_thermal) acc("solar_thermal", p.generation);
    return e;
}

} // namespace detail

// One full build+solve per alpha. Infeasible points become rows with their
// status, never dropped; solver failures are likewise recorded per row.
inline SweepReport sweep_alpha(const ValidatedScenario& s, const std::vector<double>& alphas,
                               const SweepOptions& opts = {}) {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] < 0.0 || alphas[i] > 1.0)
            throw ConfigError("sweep alpha " + std::to_string(alphas[i]) + " out of [0,1]");
        if (i > 0 && alphas[i] <= alphas[i - 1]) throw ConfigError("sweep alphas must be strictly increasing");
    }

    SweepReport report;
    report.plant_names = detail::scenario_plants(s.config());
    report.technologies = detail::scenario_technologies(s.config());
    report.rows.resize(alphas.size());

    auto solve_one = [&](std::size_t i) {
        SweepRow& row = report.rows[i];
        row.alpha = alphas[i];
        ScenarioConfig cfg = s.config();
        cfg.alpha = alphas[i];
        try {
            auto res = size_scenario(validate_scenario(std::move(cfg)), opts.sizing);
            row.status = status_name(res.status);
            if (res.status == SolveStatus::optimal) {
                row.total_cost = res.cost.total;
                row.normalized_cost = 1.0;
                row.capacity_mw = res.capacities;
                row.energy_mwh = detail::energy_by_technology(res);
                row.achieved_share = res.achieved_share;
            }
        } catch (const SolverFailure& e) {
            row.status = std::string("error: ") + e.what();
        }
    };

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || alphas.size() <= 1) {
        for (std::size_t i = 0; i < alphas.size(); ++i) solve_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < alphas.size(); i = next.fetch_add(1)) solve_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return report;
}

// normalized cost = total / base total at the same alpha; rows where either
// side is not optimal keep NaN.
inline SweepReport normalize_costs(const SweepReport& report, const SweepReport& base) {
    if (report.rows.size() != base.rows.size()) throw GridMismatch("sweep grids have different lengths");
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        if (std::abs(report.rows[i].alpha - base.rows[i].alpha) > 1e-12)
            throw GridMismatch("sweep grids differ at index " + std::to_string(i));

    SweepReport out = report;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        auto& row = out.rows[i];
        const auto& b = base.rows[i];
        if (row.status != "optimal" || b.status != "optimal") {
            row.normalized_cost = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        if (b.total_cost == 0.0) throw DivisionByZero("base case cost is zero at alpha " + std::to_string(row.alpha));
        row.normalized_cost = row.total_cost / b.total_cost;
    }
    return out;
}

// --- generation-mix aggregation ---------------------------------------------

enum class Granularity { hourly, daily, monthly };

struct MixTable {
    std::vector<std::string> technologies;  // includes "pumping" (negative) when hydro is present
    struct Row {
        std::string period;
        bool partial = false;  // period not fully covered by the horizon
        std::vector<double> energy_mwh;
    };
    std::vector<Row> rows;
};

// Per-period, per-technology energy sums. Pumping appears as a negative
// generation row, so period totals reconcile with demand.
inline MixTable aggregate_dispatch(const Dispatch& d, Granularity granularity) {
    MixTable table;
    auto add_tech = [&](const std::string& t) {
        for (const auto& e : table.technologies)
            if (e == t) return;
        table.technologies.push_back(t);
    };
    if (!d.conventional.empty()) add_tech("conventional");
    for (const auto& p : d.renewable) add_tech(p.technology.empty() ? "renewable" : p.technology);
    if (!d.hydro.empty()) {
        add_tech("hydro");
        add_tech("pumping");
    }
    if (!d.solar_thermal.empty()) add_tech("solar_thermal");

    auto tech_index = [&](const std::string& t) {
        for (std::size_t i = 0; i < table.technologies.size(); ++i)
            if (table.technologies[i] == t) return i;
        return std::size_t(0);
    };

    const double dt = d.step_hours();
    using namespace std::chrono;

    auto period_of = [&](std::size_t t) -> std::string {
        UtcTime stamp = d.start + d.step * std::int64_t(t);
        if (granularity == Granularity::hourly) return format_utc(stamp);
        year_month_day ymd{floor<days>(stamp)};
        char buf[16];
        if (granularity == Granularity::daily)
            std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                          unsigned(ymd.day()));
        else
            std::snprintf(buf, sizeof buf, "%04d-%02u", int(ymd.year()), unsigned(ymd.month()));
        return buf;
    };

    // expected number of steps for a complete period, to flag partial rows
    auto full_steps = [&](std::size_t t) -> std::size_t {
        if (granularity == Granularity::hourly) return 1;
        if (granularity == Granularity::daily) return std::size_t(std::lround(24.0 / dt));
        UtcTime stamp = d.start + d.step * std::int64_t(t);
        year_month_day ymd{floor<days>(stamp)};
        auto last = year_month_day_last{ymd.year(), month_day_last{ymd.month()}};
        return std::size_t(std::lround(24.0 * double(unsigned(last.day())) / dt));
    };

    std::string current;
    std::size_t steps_in_period = 0;
    for (std::size_t t = 0; t < d.horizon(); ++t) {
        std::string p = period_of(t);
        if (p != current) {
            if (!table.rows.empty() && steps_in_period < full_steps(t - 1)) table.rows.back().partial = true;
            table.rows.push_back({p, false, std::vector<double>(table.technologies.size(), 0.0)});
            current = p;
            steps_in_period = 0;
        }
        ++steps_in_period;
        auto& row = table.rows.back();
        for (const auto& g : d.conventional) row.energy_mwh[tech_index("conventional")] += g.generation[t] * dt;
        for (const auto& g : d.renewable)
            row.energy_mwh[tech_index(g.technology.empty() ? "renewable" : g.technology)] += g.generation[t] * dt;
        for (const auto& g : d.hydro) {
            row.energy_mwh[tech_index("hydro")] += g.generation[t] * dt;
            row.energy_mwh[tech_index("pumping")] -= g.pumping[t] * dt;
        }
        for (const auto& g : d.solar_thermal) row.energy_mwh[tech_index("solar_thermal")] += g.generation[t] * dt;
    }
    if (!table.rows.empty() && d.horizon() > 0 && steps_in_period < full_steps(d.horizon() - 1))
        table.rows.back().partial = true;
    return table;
}

// --- bus allocation -----------------------------------------------------------

struct BusTable {
    struct Row {
        std::string plant;
        std::string bus;
        double mw = 0.0;
    };
    std::vector<Row> rows;
};

// Purely presentational split of sized capacities over buses.
inline BusTable allocate_to_buses(const SizingResult& result,
                                  const std::map<std::string, std::vector<BusShare>>& allocation) {
    BusTable table;
    for (const auto& [plant, shares] : allocation) {
        auto it = result.capacities.find(plant);
        if (it == result.capacities.end()) throw WeightError("bus allocation names unknown plant '" + plant + "'");
        double sum = 0.0;
        for (const auto& s : shares) sum += s.weight;
        if (std::abs(sum - 1.0) > 1e-9)
            throw WeightError("bus weights for '" + plant + "' sum to " + std::to_string(sum));
        for (const auto& s : shares) table.rows.push_back({plant, s.bus, it->second * s.weight});
    }
    return table;
}

// --- CSV emission --------------------------------------------------------------

inline void write_sweep_csv(const SweepReport& report, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "alpha,status,total_cost,normalized_cost";
    for (const auto& p : report.plant_names) out << "," << p << "_mw";
    for (const auto& t : report.technologies) out << "," << t << "_mwh";
    out << "\n";
    auto num = [](double v) { return std::isfinite(v) ? format_csv_number(v) : std::string(); };
    for (const auto& row : report.rows) {
        out << format_csv_number(row.alpha) << "," << row.status << "," << num(row.total_cost) << ","
            << num(row.normalized_cost);
        for (const auto& p : report.plant_names) {
            auto it = row.capacity_mw.find(p);
            out << "," << (it != row.capacity_mw.end() ? format_csv_number(it->second) : std::string());
        }
        for (const auto& t : report.technologies) {
            auto it = row.energy_mwh.find(t);
            out << "," << (it != row.energy_mwh.end() ? format_csv_number(it->second) : std::string());
        }
        out << "\n";
    }
}

inline void write_mix_csv(const MixTable& table, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "period,partial";
    for (const auto& t : table.technologies) out << "," << t << "_mwh";
    out << "\n";
    for (const auto& row : table.rows) {
        out << row.period << "," << (row.partial ? 1 : 0);
        for (double v : row.energy_mwh) out << "," << format_csv_number(v);
        out << "\n";
    }
}

inline void write_bus_csv(const BusTable& table, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "plant,bus,mw\n";
    for (const auto& row : table.rows)
        out << row.plant << "," << row.bus << "," << format_csv_number(row.mw) << "\n";
}

} // namespace ressize
