#pragma once

/// Analysis report document. Field names are pinned by
/// schema/analysis_report.schema.json; numbers round-trip exactly (the JSON
/// writer emits shortest representations that parse back to the same
/// double). Every report embeds the manifest of the run that produced it.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vogellab/analysis.hpp"
#include "vogellab/dataset.hpp"
#include "vogellab/version.hpp"

namespace vogellab {

struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;  // resolved flag values
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string tool_version = kVersion;
    double wall_seconds = 0.0;
};

inline nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : m.parameters) params[key] = value;
    return {{"command", m.command},
            {"parameters", params},
            {"inputs", m.inputs},
            {"outputs", m.outputs},
            {"tool_version", m.tool_version},
            {"wall_seconds", m.wall_seconds}};
}

struct InputFileInfo {
    std::string path;
    std::size_t n = 0;
    std::map<std::string, std::string> meta;
};

inline const char* verdict_tier(const VogelVerdict& v) {
    if (v.nonclassical) return "nonclassical";
    return v.excess > 0.0 ? "inconclusive" : "classical-consistent";
}

inline nlohmann::json build_analysis_report(const std::vector<InputFileInfo>& inputs,
                                            const QuadratureDataset& pooled, const CharacteristicCurve& curve,
                                            const VogelVerdict& verdict, const RunManifest& manifest) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& in : inputs)
        files.push_back({{"path", in.path}, {"n", in.n}, {"meta", in.meta}});

    const double eta_hat = estimate_eta(pooled);
    const auto vs_eta = variance_check(pooled, eta_hat);
    const auto vs_vacuum = variance_check(pooled, 0.0);

    nlohmann::json curve_json = nlohmann::json::array();
    for (std::size_t i = 0; i < curve.nu_grid.size(); ++i) {
        const double mag = std::abs(curve.estimates[i]);
        const double vac = vacuum_char(curve.nu_grid[i]);
        curve_json.push_back({{"nu", curve.nu_grid[i]},
                              {"re", curve.estimates[i].real()},
                              {"im", curve.estimates[i].imag()},
                              {"abs", mag},
                              {"std_error", curve.std_errors[i]},
                              {"vacuum", vac},
                              {"excess", mag - vac}});
    }

    // Upward bias of |F_hat|: E|F_hat|^2 = |F|^2 + (1-|F|^2)/n, reported as
    // stated rather than corrected. Bound evaluated at the best point.
    const double best_mag = verdict.excess + vacuum_char(verdict.best_nu);
    const double sigma2 = (1.0 - std::min(1.0, best_mag * best_mag)) / double(curve.n);
    const double bias_bound = 0.5 * sigma2 / std::max(std::abs(best_mag), 1.0 / std::sqrt(double(curve.n)));

    nlohmann::json verdict_json = {{"nonclassical", verdict.nonclassical},
                                   {"tier", verdict_tier(verdict)},
                                   {"best_nu", verdict.best_nu},
                                   {"excess", verdict.excess},
                                   {"significance", verdict.significance},
                                   {"k", verdict.k_required},
                                   {"magnitude_bias_bound", bias_bound},
                                   {"suggested_min_samples", nullptr}};
    if (!verdict.nonclassical && eta_hat > 0.0)
        verdict_json["suggested_min_samples"] = min_samples(eta_hat, verdict.k_required).n_min;

    return {{"schema_version", "vogellab-analysis-report/1"},
            {"tool_version", kVersion},
            {"manifest", to_json(manifest)},
            {"input", {{"files", files}, {"units", units_name(pooled.units)}}},
            {"n", pooled.count()},
            {"estimated_eta", eta_hat},
            {"variance",
             {{"sample_variance", vs_eta.sample_variance},
              {"std_error", vs_eta.std_error},
              {"z_vs_estimated_eta", vs_eta.z},
              {"z_vs_vacuum", vs_vacuum.z},
              {"degenerate", vs_eta.degenerate}}},
            {"curve", curve_json},
            {"verdict", verdict_json}};
}

}  // namespace vogellab
