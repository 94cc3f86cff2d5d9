// runner.hpp — Mode drivers behind the CLI subcommands: channel spectra,
// plane-wave scenes, figure presets and the oracle cross-check harness.

#pragma once

#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

#include "sqspec/channels.hpp"
#include "sqspec/spectra.hpp"

namespace sqspec::cli {

using json = nlohmann::json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_infeasible = 2;
inline constexpr int exit_oracle_failure = 3;

/// Operational feature flags of a closed-form channel spectrum, from the
/// sign of S - background - scattered at the line center and a local
/// extremum scan with step gamma/100.
struct SpectrumFeatures {
    bool symmetric{false};       // max |S(+d) - S(-d)| <= 1e-9
    bool central_peak{false};    // interference at the center > 0
    bool central_dip{false};     // interference at the center < 0
    bool central_hole{false};    // strict local minimum of the total at d = 0
    bool secondary_extrema{false};  // >= 3 interior extrema ('pimple' structure)
    double asymmetry{0.0};
    int extremum_count{0};
};

SpectrumFeatures analyze_features(const AggregateSqueezing& agg,
                                  const ChannelSqueezing& channel,
                                  double span = 8.0);

/// Random pure channel set with N_alpha in [0, 8], uniform phases and 1-4
/// channels; used by the oracle harness and the acceptance suite.
ChannelSet random_pure_channel_set(std::mt19937_64& rng);

struct RunResult {
    int exit_code{exit_ok};
    json summary;
};

RunResult run_channel(const json& config, const std::filesystem::path& out_dir);
RunResult run_planewave(const json& config, const std::filesystem::path& out_dir);
RunResult run_figure(const json& config, const std::filesystem::path& out_dir);
RunResult run_oracle_check(const json& config, const std::filesystem::path& out_dir);

/// Built-in figure preset configs (fig1, fig2, fig3); the shipped preset
/// files contain the same documents.
json figure_preset(const std::string& name);

}  // namespace sqspec::cli
