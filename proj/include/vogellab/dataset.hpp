#pragma once

/// Quadrature record container and its text format: '#' key=value header
/// lines followed by one sample per line at 17 significant digits, which
/// round-trips doubles bit-exactly.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vogellab {

enum class Units { normalized, raw_photoelectrons };

inline const char* units_name(Units u) {
    return u == Units::normalized ? "normalized" : "raw_photoelectrons";
}

struct UnitsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parse failure; message carries "<name>:<line>: ...".
struct DatasetParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureDataset {
    std::vector<double> samples;
    Units units = Units::normalized;
    std::map<std::string, std::string> meta;  // provenance, free-form

    std::size_t count() const noexcept { return samples.size(); }
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_dataset(const QuadratureDataset& ds, std::ostream& os) {
    os << "# units=" << units_name(ds.units) << "\n";
    os << "# count=" << ds.count() << "\n";
    // Canonical keys first, remaining meta in lexicographic order.
    static const char* kFirst[] = {"seed", "state", "efficiency", "electronic_noise_sigma", "phase_policy"};
    for (const char* key : kFirst)
        if (auto it = ds.meta.find(key); it != ds.meta.end()) os << "# " << key << "=" << it->second << "\n";
    for (const auto& [key, value] : ds.meta) {
        bool canonical = false;
        for (const char* k : kFirst) canonical = canonical || key == k;
        if (!canonical) os << "# " << key << "=" << value << "\n";
    }
    for (double x : ds.samples) os << detail::fmt17(x) << "\n";
}

inline void write_dataset(const QuadratureDataset& ds, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    write_dataset(ds, os);
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline QuadratureDataset read_dataset(std::istream& is, const std::string& name = "<stream>") {
    QuadratureDataset ds;
    std::string line;
    std::size_t lineno = 0;
    bool units_seen = false;
    long long declared_count = -1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::size_t start = line.find_first_not_of(" \t", 1);
            if (start == std::string::npos) continue;
            const std::size_t eq = line.find('=', start);
            if (eq == std::string::npos)
                throw DatasetParseError(name + ":" + std::to_string(lineno) + ": malformed metadata line");
            std::string key = line.substr(start, eq - start);
            std::string value = line.substr(eq + 1);
            if (key == "units") {
                units_seen = true;
                if (value == "normalized")
                    ds.units = Units::normalized;
                else if (value == "raw_photoelectrons")
                    ds.units = Units::raw_photoelectrons;
                else
                    throw DatasetParseError(name + ":" + std::to_string(lineno) + ": unknown units '" + value + "'");
            } else if (key == "count") {
                declared_count = std::atoll(value.c_str());
            } else {
                ds.meta[key] = value;
            }
            continue;
        }
        const char* begin = line.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || !std::isfinite(v))
            throw DatasetParseError(name + ":" + std::to_string(lineno) + ": bad sample '" + line + "'");
        ds.samples.push_back(v);
    }
    if (!units_seen)
        throw DatasetParseError(name + ": missing 'units' metadata");
    if (declared_count >= 0 && static_cast<std::size_t>(declared_count) != ds.count())
        throw DatasetParseError(name + ": count=" + std::to_string(declared_count) + " but " +
                                std::to_string(ds.count()) + " samples found");
    return ds;
}

inline QuadratureDataset read_dataset(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    return read_dataset(is, path.filename().string());
}

}  // namespace vogellab
