// io.hpp — JSON (de)serialization of channel sets and plane-wave scenes,
// and deterministic CSV output of spectrum decompositions.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sqspec/channels.hpp"
#include "sqspec/planewave.hpp"
#include "sqspec/spectra.hpp"

namespace sqspec::io {

using json = nlohmann::json;

/// Channel set as [{"n_alpha": .., "m_alpha": [re, im], "gamma_alpha": ..}, ..].
ChannelSet channel_set_from_json(const json& j);
json channel_set_to_json(const ChannelSet& set);

/// Aggregate echo, including the applied phase rotation in radians.
json aggregate_to_json(const AggregateSqueezing& agg);

struct Scene {
    planewave::AtomDipole dipole;
    planewave::DetectorGeometry detector;
    planewave::DirectionalSqueezing profile;
    int quadrature_order{64};
    std::optional<planewave::AnalyzerCone> analyzer;
};
Scene scene_from_json(const json& j);

DetuningGrid grid_from_json(const json& j);  // {"min":..,"max":..,"points":..}

/// CSV with header detuning,background,scattered,interference,total.
/// Values are spectra in the 2*pi*S convention (units of 1/2pi per unit
/// gamma), detuning in units of gamma. Formatting is fixed so identical
/// inputs give byte-identical files.
std::string spectrum_to_csv(const SpectrumDecomposition& spec,
                            const std::optional<double>& geometric_prefactor =
                                std::nullopt);

/// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace sqspec::io
