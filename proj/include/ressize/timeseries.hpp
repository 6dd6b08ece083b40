#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "ressize/errors.hpp"

namespace ressize {

enum class Unit { mw, per_unit, kw_per_m2, degrees, mwh };

inline const char* unit_name(Unit u) {
    switch (u) {
        case Unit::mw: return "MW";
        case Unit::per_unit: return "per_unit";
        case Unit::kw_per_m2: return "kW_per_m2";
        case Unit::degrees: return "degrees";
        case Unit::mwh: return "MWh";
    }
    return "?";
}

using UtcTime = std::chrono::sys_seconds;

// Parses the fixed layout YYYY-MM-DDTHH:MM:SSZ. Anything else is rejected.
inline UtcTime parse_utc(std::string_view s) {
    auto fail = [&] { throw ParseError("bad timestamp '" + std::string(s) + "' (expected YYYY-MM-DDTHH:MM:SSZ)"); };
    if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z')
        fail();
    auto num = [&](int pos, int len) {
        int v = 0;
        for (int i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9') fail();
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    using namespace std::chrono;
    year_month_day ymd{year{num(0, 4)}, month{unsigned(num(5, 2))}, day{unsigned(num(8, 2))}};
    if (!ymd.ok()) fail();
    int hh = num(11, 2), mm = num(14, 2), ss = num(17, 2);
    if (hh > 23 || mm > 59 || ss > 60) fail();
    return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
}

inline std::string format_utc(UtcTime t) {
    using namespace std::chrono;
    auto d = floor<days>(t);
    year_month_day ymd{d};
    auto tod = t - d;
    int hh = int(duration_cast<hours>(tod).count());
    int mm = int(duration_cast<minutes>(tod).count()) % 60;
    int ss = int(duration_cast<seconds>(tod).count()) % 60;
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()), hh, mm, ss);
    return buf;
}

// Uniformly sampled series with an explicit unit tag. The cadence defaults
// to hourly; resampled series carry their widened step.
struct TimeSeries {
    UtcTime start{};
    std::chrono::seconds step{3600};
    std::vector<double> values;
    Unit unit{Unit::mw};

    std::size_t size() const { return values.size(); }
    double step_hours() const { return double(step.count()) / 3600.0; }
    UtcTime timestamp(std::size_t i) const { return start + step * std::int64_t(i); }
};

// Checks the type invariants; `where` names the series in error messages.
inline void check_series(const TimeSeries& ts, const std::string& where) {
    if (ts.values.empty()) throw ConfigError(where + ": series is empty");
    if (ts.step.count() <= 0) throw ConfigError(where + ": non-positive step");
    for (std::size_t i = 0; i < ts.values.size(); ++i) {
        double v = ts.values[i];
        if (!std::isfinite(v)) throw ConfigError(where + ": non-finite value at index " + std::to_string(i));
        if (ts.unit == Unit::per_unit && (v < 0.0 || v > 1.0))
            throw RangeError(where + ": per-unit value " + std::to_string(v) + " out of [0,1] at index " +
                             std::to_string(i));
        if (ts.unit == Unit::degrees && (v < 0.0 || v > 90.0))
            throw RangeError(where + ": angle " + std::to_string(v) + " out of [0,90] at index " + std::to_string(i));
    }
}

} // namespace ressize
