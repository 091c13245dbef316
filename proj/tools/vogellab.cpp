// vogellab: simulate balanced-homodyne quadrature records for Fock-diagonal
// states, test them against the vacuum characteristic-function bound, plan
// sample sizes, and emit figure-ready CSV curves.
//
// Exit codes: 0 success (whatever the verdict), 1 runtime/IO failure,
// 2 usage error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vogellab/analysis.hpp"
#include "vogellab/dataset.hpp"
#include "vogellab/homodyne.hpp"
#include "vogellab/report.hpp"
#include "vogellab/states.hpp"
#include "vogellab/version.hpp"

namespace {

using namespace vogellab;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

FockDiagonalState parse_state_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw UsageError("bad state spec '" + spec + "' (expected mix:<eta> | diosi:<nmax> | fock:<w0,w1,...>)");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    auto parse_double = [&](const std::string& text) {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
            throw UsageError("bad number '" + text + "' in state spec '" + spec + "'");
        return v;
    };
    if (kind == "mix") return make_photon_vacuum_mixture(parse_double(arg));
    if (kind == "diosi") {
        char* end = nullptr;
        const long n = std::strtol(arg.c_str(), &end, 10);
        if (end == arg.c_str() || *end != '\0' || n < 1 || n > 1000)
            throw UsageError("bad diosi truncation '" + arg + "'");
        return make_diosi_state(static_cast<int>(n));
    }
    if (kind == "fock") {
        std::vector<double> weights;
        std::size_t pos = 0;
        while (pos <= arg.size()) {
            const auto comma = arg.find(',', pos);
            const std::string tok = arg.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            weights.push_back(parse_double(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return FockDiagonalState(std::move(weights));
    }
    throw UsageError("unknown state kind '" + kind + "' in '" + spec + "'");
}

// Output sink: path or "-" for stdout.
struct Sink {
    std::ofstream file;
    std::ostream* os = nullptr;

    explicit Sink(const std::string& path) {
        if (path == "-") {
            os = &std::cout;
        } else {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open for writing: " + path);
            os = &file;
        }
    }
};

void write_csv_manifest(std::ostream& os, const RunManifest& m) {
    os << "# command=" << m.command << "\n";
    os << "# tool_version=" << m.tool_version << "\n";
    for (const auto& [key, value] : m.parameters) os << "# " << key << "=" << value << "\n";
}

// --- simulate ---------------------------------------------------------

struct SimulateOpts {
    std::string state_spec;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    double efficiency = 1.0;
    double noise_sigma = 0.0;
    double lo_count = 1e6;
    bool raw = false;
    std::string out;
};

int run_simulate(const SimulateOpts& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const FockDiagonalState state = parse_state_spec(opt.state_spec);
    DetectorConfig det{opt.efficiency, opt.noise_sigma, opt.lo_count, opt.seed};
    det.validate();
    const Units units = opt.raw ? Units::raw_photoelectrons : Units::normalized;
    QuadratureDataset ds = simulate_homodyne(state, det, opt.n, units);
    write_dataset(ds, std::filesystem::path(opt.out));
    const auto m = detail::moments(ds.samples);
    std::cout << "wrote " << opt.out << ": n=" << ds.count() << " units=" << units_name(ds.units)
              << " variance=" << m.variance;
    if (!opt.raw) std::cout << " estimated_eta=" << estimate_eta(ds);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << " (" << secs << " s)\n";
    return 0;
}

// --- analyze ----------------------------------------------------------

struct AnalyzeOpts {
    std::vector<std::string> inputs;
    std::string vacuum_ref;
    double nu_max = 12.0;
    double nu_step = 0.05;
    double k = 3.0;
    std::string out;  // report path or "-"
};

int run_analyze(const AnalyzeOpts& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<QuadratureDataset> vacuum_ref;
    if (!opt.vacuum_ref.empty()) vacuum_ref = read_dataset(std::filesystem::path(opt.vacuum_ref));

    std::vector<InputFileInfo> infos;
    QuadratureDataset pooled;
    pooled.units = Units::normalized;
    for (const auto& path : opt.inputs) {
        QuadratureDataset ds = read_dataset(std::filesystem::path(path));
        if (ds.units == Units::raw_photoelectrons) {
            if (!vacuum_ref)
                throw UsageError("input '" + path + "' is in raw units; provide --vacuum-ref for calibration");
            ds = calibrate(ds, *vacuum_ref);
        }
        infos.push_back({path, ds.count(), ds.meta});
        pooled.samples.insert(pooled.samples.end(), ds.samples.begin(), ds.samples.end());
    }

    const auto grid = default_nu_grid(opt.nu_max, opt.nu_step);
    const CharacteristicCurve curve = empirical_char_fn(pooled, grid);
    const VogelVerdict verdict = vogel_test(curve, opt.k);

    RunManifest manifest;
    manifest.command = "analyze";
    manifest.parameters = {{"nu_max", detail::fmt17(opt.nu_max)},
                           {"nu_step", detail::fmt17(opt.nu_step)},
                           {"k", detail::fmt17(opt.k)}};
    if (!opt.vacuum_ref.empty()) manifest.parameters.emplace_back("vacuum_ref", opt.vacuum_ref);
    manifest.inputs = opt.inputs;
    if (opt.out != "-") manifest.outputs = {opt.out};
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const nlohmann::json report = build_analysis_report(infos, pooled, curve, verdict, manifest);

    std::cout << "n=" << pooled.count() << " estimated_eta=" << report["estimated_eta"].get<double>() << "\n";
    std::cout << "verdict: " << verdict_tier(verdict) << " (best_nu=" << verdict.best_nu
              << " excess=" << verdict.excess << " significance=" << verdict.significance << " k=" << opt.k
              << ")\n";
    if (!report["verdict"]["suggested_min_samples"].is_null())
        std::cout << "suggested_min_samples(eta=" << report["estimated_eta"].get<double>() << ", k=" << opt.k
                  << "): " << report["verdict"]["suggested_min_samples"].get<std::uint64_t>() << "\n";

    Sink sink(opt.out);
    *sink.os << report.dump(2) << "\n";
    if (sink.os->fail()) throw std::runtime_error("failed writing report to " + opt.out);
    if (opt.out != "-") std::cout << "report written to " << opt.out << "\n";
    return 0;
}

// --- plan -------------------------------------------------------------

struct PlanOpts {
    std::optional<double> eta;
    double eta_min = 0.0, eta_max = 0.0, step = 0.0;
    double k = 1.0;
    std::string out = "-";
};

int run_plan(const PlanOpts& opt) {
    std::vector<double> etas;
    RunManifest manifest;
    manifest.command = "plan";
    if (opt.eta) {
        etas.push_back(*opt.eta);
        manifest.parameters = {{"eta", detail::fmt17(*opt.eta)}, {"k", detail::fmt17(opt.k)}};
    } else {
        if (!(opt.eta_min > 0.0 && opt.eta_min <= opt.eta_max && opt.eta_max <= 1.0 && opt.step > 0.0))
            throw UsageError("plan: need --eta, or 0 < --eta-min <= --eta-max <= 1 with --step > 0");
        const auto count = static_cast<std::size_t>(std::floor((opt.eta_max - opt.eta_min) / opt.step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) etas.push_back(opt.eta_min + double(i) * opt.step);
        manifest.parameters = {{"eta_min", detail::fmt17(opt.eta_min)},
                               {"eta_max", detail::fmt17(opt.eta_max)},
                               {"eta_step", detail::fmt17(opt.step)},
                               {"k", detail::fmt17(opt.k)}};
    }
    Sink sink(opt.out);
    write_csv_manifest(*sink.os, manifest);
    *sink.os << "eta,nu_opt,gap,n_min\n";
    for (double eta : etas) {
        const auto plan = min_samples(eta, opt.k);
        *sink.os << detail::fmt17(eta) << "," << detail::fmt17(nu_opt(eta)) << ","
                 << detail::fmt17(vogel_gap(eta)) << "," << plan.n_min << "\n";
    }
    if (sink.os->fail()) throw std::runtime_error("failed writing plan CSV");
    return 0;
}

// --- curves -----------------------------------------------------------

struct CurvesOpts {
    std::string state_spec;
    double nu_max = 12.0;
    double nu_step = 0.05;
    std::string out = "-";
};

int run_curves(const CurvesOpts& opt) {
    const FockDiagonalState state = parse_state_spec(opt.state_spec);
    RunManifest manifest;
    manifest.command = "curves";
    manifest.parameters = {{"state", opt.state_spec},
                           {"nu_max", detail::fmt17(opt.nu_max)},
                           {"nu_step", detail::fmt17(opt.nu_step)}};
    Sink sink(opt.out);
    write_csv_manifest(*sink.os, manifest);
    *sink.os << "nu,F_state,abs_F_state,F_vacuum\n";
    for (double nu : default_nu_grid(opt.nu_max, opt.nu_step)) {
        const double f = char_fn(state, nu).real();
        *sink.os << detail::fmt17(nu) << "," << detail::fmt17(f) << "," << detail::fmt17(std::abs(f)) << ","
                 << detail::fmt17(vacuum_char(nu)) << "\n";
    }
    if (sink.os->fail()) throw std::runtime_error("failed writing curves CSV");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homodyne quadrature simulator and Vogel nonclassicality analysis"};
    app.set_version_flag("--version", vogellab::kVersion);
    app.require_subcommand(1);
    app.footer("Environment: VOGELLAB_THREADS caps internal parallelism (results are identical).");

    SimulateOpts sim;
    auto* simulate = app.add_subcommand("simulate", "generate a quadrature dataset file");
    simulate->add_option("--state", sim.state_spec, "mix:<eta> | diosi:<nmax> | fock:<w0,w1,...>")->required();
    simulate->add_option("--n", sim.n, "number of samples")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--efficiency", sim.efficiency, "detector efficiency")->capture_default_str();
    simulate->add_option("--noise-sigma", sim.noise_sigma, "electronic noise sigma, normalized units")
        ->capture_default_str();
    simulate->add_option("--lo-count", sim.lo_count, "LO mean photoelectron count N0 (raw units)")
        ->capture_default_str();
    simulate->add_flag("--raw", sim.raw, "emit raw photoelectron units instead of normalized");
    simulate->add_option("--out", sim.out, "output dataset path")->required();

    AnalyzeOpts ana;
    auto* analyze = app.add_subcommand("analyze", "estimate the characteristic function and test it");
    analyze->add_option("--in", ana.inputs, "input dataset(s); multiple files are pooled")->required();
    analyze->add_option("--vacuum-ref", ana.vacuum_ref, "raw vacuum reference for calibrating raw inputs");
    analyze->add_option("--nu-max", ana.nu_max, "scan limit")->capture_default_str();
    analyze->add_option("--nu-step", ana.nu_step, "scan step")->capture_default_str();
    analyze->add_option("--k", ana.k, "significance threshold in standard errors")->capture_default_str();
    analyze->add_option("--out", ana.out, "report path ('-' for stdout)")->default_val("-");

    PlanOpts plan;
    auto* planner = app.add_subcommand("plan", "minimum sample counts over an efficiency range");
    planner->add_option("--eta", plan.eta, "single efficiency");
    planner->add_option("--eta-min", plan.eta_min, "range start");
    planner->add_option("--eta-max", plan.eta_max, "range end");
    planner->add_option("--step", plan.step, "range step");
    planner->add_option("--k", plan.k, "significance threshold")->capture_default_str();
    planner->add_option("--out", plan.out, "CSV path ('-' for stdout)")->capture_default_str();

    CurvesOpts cur;
    auto* curves = app.add_subcommand("curves", "closed-form characteristic-function curves as CSV");
    curves->add_option("--state", cur.state_spec, "state spec")->required();
    curves->add_option("--nu-max", cur.nu_max, "grid limit")->capture_default_str();
    curves->add_option("--nu-step", cur.nu_step, "grid step")->capture_default_str();
    curves->add_option("--out", cur.out, "CSV path ('-' for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*analyze) return run_analyze(ana);
        if (*planner) return run_plan(plan);
        return run_curves(cur);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
