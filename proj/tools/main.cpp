// sqspec command line: closed-form channel spectra, plane-wave scenes,
// figure presets and the independent oracle cross-check.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sqspec/channels.hpp"
#include "sqspec/runner.hpp"

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    return json::parse(f);
}

void apply_grid(json& config, const std::string& grid_arg) {
    if (grid_arg.empty()) return;
    double lo, hi;
    std::size_t points;
    if (std::sscanf(grid_arg.c_str(), "%lf:%lf:%zu", &lo, &hi, &points) != 3)
        throw std::invalid_argument("--grid expects MIN:MAX:POINTS");
    config["grid"] = {{"min", lo}, {"max", hi}, {"points", points}};
}

// key=value with a dotted path; value parsed as JSON, falling back to string.
void apply_overrides(json& config, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got: " + kv);
        json::json_pointer ptr;
        std::string path = kv.substr(0, eq);
        for (std::size_t pos = 0; pos <= path.size();) {
            auto dot = path.find('.', pos);
            if (dot == std::string::npos) dot = path.size();
            ptr /= path.substr(pos, dot - pos);
            pos = dot + 1;
        }
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;
        }
        config[ptr] = value;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fluorescence spectra of a two-level atom driven by "
                 "multi-channel squeezed white noise"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", grid_arg, preset;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "JSON config file");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--grid", grid_arg, "detuning grid MIN:MAX:POINTS");
        sub->add_option("--set", overrides,
                        "dotted-path config override key=value");
    };

    auto* spectrum = app.add_subcommand(
        "spectrum", "closed-form spectrum of one channel of a channel set");
    add_common(spectrum, true);

    auto* planewave = app.add_subcommand(
        "planewave", "directional spectrum for a plane-wave squeezing scene");
    add_common(planewave, true);

    auto* figure = app.add_subcommand(
        "figure", "spectrum family for a shipped preset (fig1, fig2, fig3)");
    figure->add_option("--preset", preset, "preset name")->required();
    add_common(figure, false);

    auto* oracle = app.add_subcommand(
        "oracle-check",
        "cross-check closed forms against the regression-theorem integrator");
    add_common(oracle, false);

    CLI11_PARSE(app, argc, argv);

    try {
        json config = config_path.empty() ? json::object()
                                          : load_config(config_path);
        if (figure->parsed()) {
            json base = sqspec::cli::figure_preset(preset);
            base.merge_patch(config);
            config = std::move(base);
        }
        apply_grid(config, grid_arg);
        apply_overrides(config, overrides);

        sqspec::cli::RunResult result;
        if (spectrum->parsed())
            result = sqspec::cli::run_channel(config, out_dir);
        else if (planewave->parsed())
            result = sqspec::cli::run_planewave(config, out_dir);
        else if (figure->parsed())
            result = sqspec::cli::run_figure(config, out_dir);
        else
            result = sqspec::cli::run_oracle_check(config, out_dir);

        std::cout << result.summary.dump(2) << "\n";
        return result.exit_code;
    } catch (const sqspec::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return sqspec::cli::exit_infeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return sqspec::cli::exit_validation;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return sqspec::cli::exit_validation;
    } catch (const json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return sqspec::cli::exit_validation;
    }
}
