#pragma once

// Shared helpers for the test binaries: two-sample KS machinery, subprocess
// driving for the CLI, and scoped environment overrides.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

// Kolmogorov two-sample statistic sup_x |F1(x) - F2(x)|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(double(i) / double(a.size()) - double(j) / double(b.size())));
    }
    return d;
}

// Critical value at significance alpha = 0.01: c(alpha) sqrt((n+m)/(n m)).
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
    constexpr double kC = 1.6276236307187293;  // sqrt(-ln(0.005)/2)
    return kC * std::sqrt((double(n) + double(m)) / (double(n) * double(m)));
}

inline std::string env_or_fail(const char* name) {
    const char* v = std::getenv(name);
    if (!v) throw std::runtime_error(std::string("environment variable not set: ") + name);
    return v;
}

inline std::filesystem::path fresh_dir(const std::string& stem) {
    auto dir = std::filesystem::temp_directory_path() / ("vogellab_" + stem + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Run the built CLI with the given argument string.
inline CliResult run_cli(const std::string& args) {
    const std::string bin = env_or_fail("VOGELLAB_BIN");
    const auto dir = std::filesystem::temp_directory_path();
    const auto out_path = dir / ("vogellab_out_" + std::to_string(::getpid()) + ".txt");
    const auto err_path = dir / ("vogellab_err_" + std::to_string(::getpid()) + ".txt");
    const std::string cmd = bin + " " + args + " >" + out_path.string() + " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream f(p);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

inline std::string slurp_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct ScopedEnv {
    std::string key;
    std::string old_value;
    bool had_old = false;

    ScopedEnv(const std::string& k, const std::string& v) : key(k) {
        if (const char* old = std::getenv(key.c_str())) {
            had_old = true;
            old_value = old;
        }
        ::setenv(key.c_str(), v.c_str(), 1);
    }
    ~ScopedEnv() {
        if (had_old)
            ::setenv(key.c_str(), old_value.c_str(), 1);
        else
            ::unsetenv(key.c_str());
    }
};

// Random generic Fock-diagonal weight vectors for property tests.
inline std::vector<double> random_weights(std::mt19937_64& eng, int n_max) {
    std::exponential_distribution<double> ed(1.0);
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1);
    double sum = 0.0;
    for (auto& x : w) {
        x = ed(eng);
        sum += x;
    }
    for (auto& x : w) x /= sum;
    // Nudge the largest weight so the sum clears the 1e-12 constructor gate.
    double s2 = 0.0;
    for (double x : w) s2 += x;
    *std::max_element(w.begin(), w.end()) += 1.0 - s2;
    return w;
}

}  // namespace testsupport
