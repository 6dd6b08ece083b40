#pragma once

// Optional remote profile fetcher. Isolated in its own header so the core
// library never touches the network; everything downstream consumes only
// the cached CSV file.

#ifdef RESSIZE_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "ressize/errors.hpp"
#include "ressize/io.hpp"
#include "ressize/timeseries.hpp"

namespace ressize {

constexpr const char* kNinjaTokenEnv = "RESSIZE_NINJA_TOKEN";

struct FetchRequest {
    double lat = 0.0;
    double lon = 0.0;
    int year = 2019;
    std::string technology = "pv";  // pv | wind
    fs::path cache_dir = ".";
    std::string base_url = "https://www.renewables.ninja";
    std::string token;  // empty -> read from RESSIZE_NINJA_TOKEN
};

inline fs::path fetch_cache_path(const FetchRequest& req) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "ninja_%s_%.4f_%.4f_%d.csv", req.technology.c_str(), req.lat, req.lon, req.year);
    return req.cache_dir / buf;
}

// Hourly per-unit capacity factors for a location/year. A cache hit makes
// no network call; a fetched series is validated and then written to the
// cache in the exact read_timeseries_csv format.
inline TimeSeries fetch_resource(const FetchRequest& req) {
    const fs::path cache = fetch_cache_path(req);
    if (fs::exists(cache)) return read_timeseries_csv(cache, Unit::per_unit);

    std::string token = req.token;
    if (token.empty()) {
        const char* env = std::getenv(kNinjaTokenEnv);
        if (!env || !*env) throw AuthError(std::string("no API token: set ") + kNinjaTokenEnv);
        token = env;
    }

#ifndef RESSIZE_WITH_TLS
    if (req.base_url.rfind("https://", 0) == 0)
        throw NetworkError("this build has no TLS support; use an http:// base URL or pre-populate the cache at " +
                           cache.string());
#endif

    httplib::Client client(req.base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    char query[160];
    std::snprintf(query, sizeof query, "/api/data/%s?lat=%.4f&lon=%.4f&year=%d&format=csv", req.technology.c_str(),
                  req.lat, req.lon, req.year);
    httplib::Headers headers{{"Authorization", "Token " + token}};
    auto res = client.Get(query, headers);
    if (!res) throw NetworkError("request to " + req.base_url + " failed: " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        throw AuthError("provider rejected the token from " + std::string(kNinjaTokenEnv) + " (HTTP " +
                        std::to_string(res->status) + ")");
    if (res->status == 429) throw QuotaError("provider rate limit hit (HTTP 429)");
    if (res->status != 200) throw NetworkError("unexpected HTTP status " + std::to_string(res->status));

    // validate before committing to the cache
    fs::create_directories(req.cache_dir);
    const fs::path tmp = cache.string() + ".part";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << res->body;
    }
    TimeSeries ts;
    try {
        ts = read_timeseries_csv(tmp, Unit::per_unit);
    } catch (...) {
        fs::remove(tmp);
        throw;
    }
    fs::rename(tmp, cache);
    return ts;
}

} // namespace ressize
