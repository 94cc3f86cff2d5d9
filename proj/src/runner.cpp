#include "sqspec/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "sqspec/bloch.hpp"
#include "sqspec/io.hpp"
#include "sqspec/planewave.hpp"

namespace sqspec::cli {

namespace {

std::string format_name(const char* fmt, double value) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

AggregateSqueezing target_aggregate(double n, double m2_ratio) {
    AggregateSqueezing agg;
    agg.gamma = 1.0;
    agg.big_n = n;
    agg.big_m = std::sqrt(m2_ratio * n * (n + 1.0));
    agg.gamma_plus = agg.big_n + agg.big_m + 0.5;
    agg.gamma_minus = agg.big_n - agg.big_m + 0.5;
    agg.phase_rotation = 0.0;
    return agg;
}

json features_to_json(const SpectrumFeatures& f) {
    return json{{"symmetric", f.symmetric},
                {"central_peak", f.central_peak},
                {"central_dip", f.central_dip},
                {"central_hole", f.central_hole},
                {"pimple", f.secondary_extrema},
                {"asymmetry", f.asymmetry},
                {"extremum_count", f.extremum_count}};
}

}  // namespace

SpectrumFeatures analyze_features(const AggregateSqueezing& agg,
                                  const ChannelSqueezing& channel, double span) {
    const double step = agg.gamma / 100.0;
    const int half = static_cast<int>(std::lround(span / step));
    DetuningGrid grid;
    grid.uniform = true;
    grid.detunings.resize(2 * half + 1);
    for (int i = -half; i <= half; ++i)
        grid.detunings[i + half] = step * i;

    const SpectrumDecomposition spec = channel_spectrum(agg, channel, grid, true);
    const std::vector<double>& t = spec.total;
    const int center = half;

    SpectrumFeatures f;
    f.asymmetry = 0.0;
    for (int i = 1; i <= half; ++i)
        f.asymmetry =
            std::max(f.asymmetry, std::abs(t[center + i] - t[center - i]));
    f.symmetric = f.asymmetry <= 1e-9;

    const double interference_at_center = spec.interference[center];
    f.central_peak = interference_at_center > 1e-12;
    f.central_dip = interference_at_center < -1e-12;

    f.central_hole = t[center] < t[center - 1] && t[center] < t[center + 1];
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double dl = t[i] - t[i - 1];
        const double dr = t[i + 1] - t[i];
        if (dl * dr < 0.0) ++f.extremum_count;
    }
    f.secondary_extrema = f.extremum_count >= 3;
    return f;
}

ChannelSet random_pure_channel_set(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_real_distribution<double> n_dist(0.0, 8.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> coupling(0.1, 1.0);

    ChannelSet set;
    const int k = count(rng);
    for (int i = 0; i < k; ++i)
        set.channels.push_back(
            ChannelSqueezing::pure(n_dist(rng), phase(rng), coupling(rng)));
    return set;
}

RunResult run_channel(const json& config, const std::filesystem::path& out_dir) {
    const ChannelSet set = io::channel_set_from_json(config);
    const AggregateSqueezing agg = aggregate(set);
    const std::size_t idx = config.value("channel_index", std::size_t{0});
    if (idx >= set.channels.size())
        throw std::invalid_argument("run_channel: channel_index out of range");
    const bool include_background = config.value("include_background", true);

    const DetuningGrid grid =
        io::grid_from_json(config.value("grid", json::object()));
    const ChannelSqueezing channel =
        in_aggregate_convention(set.channels[idx], agg);
    const SpectrumDecomposition spec =
        channel_spectrum(agg, channel, grid, include_background);

    const std::string name = config.value("output", std::string("spectrum.csv"));
    io::write_file_atomic(out_dir / name, io::spectrum_to_csv(spec));

    RunResult r;
    r.summary = json{{"aggregate", io::aggregate_to_json(agg)},
                     {"channel_index", idx},
                     {"features", features_to_json(analyze_features(agg, channel))},
                     {"output", name}};
    io::write_file_atomic(out_dir / "summary.json", r.summary.dump(2) + "\n");
    return r;
}

RunResult run_planewave(const json& config, const std::filesystem::path& out_dir) {
    const io::Scene scene = io::scene_from_json(config);
    const AggregateSqueezing agg = planewave::aggregate_from_sphere(
        scene.dipole, scene.profile, scene.quadrature_order);
    const DetuningGrid grid =
        io::grid_from_json(config.value("grid", json::object()));

    const SpectrumDecomposition spec = planewave::direction_spectrum(
        scene.dipole, scene.profile, scene.detector, agg, grid,
        scene.quadrature_order, scene.analyzer);
    const double prefactor = planewave::geometric_prefactor(scene.detector);

    const std::string name = config.value("output", std::string("planewave.csv"));
    io::write_file_atomic(out_dir / name, io::spectrum_to_csv(spec, prefactor));

    RunResult r;
    r.summary = json{{"aggregate", io::aggregate_to_json(agg)},
                     {"geometric_prefactor", prefactor},
                     {"output", name}};
    io::write_file_atomic(out_dir / "summary.json", r.summary.dump(2) + "\n");
    return r;
}

RunResult run_figure(const json& config, const std::filesystem::path& out_dir) {
    const std::string preset = config.at("preset").get<std::string>();
    const double n = config.at("n").get<double>();
    const double m2_ratio = config.at("m2_ratio").get<double>();
    const AggregateSqueezing agg = target_aggregate(n, m2_ratio);
    const DetuningGrid grid =
        io::grid_from_json(config.value("grid", json::object()));

    json entries = json::array();

    if (config.contains("zetas")) {
        const double arg_m = config.value("arg_m_alpha_pi", 1.0) * M_PI;
        for (const double zeta : config.at("zetas").get<std::vector<double>>()) {
            const double n_alpha =
                (1.0 + zeta / 1000.0) * n * n / (2.0 * n + 1.0);
            const double w = max_channel_weight(agg, n_alpha, arg_m);
            const ChannelSqueezing channel =
                ChannelSqueezing::pure(n_alpha, arg_m, w * agg.gamma);
            const SpectrumDecomposition spec =
                channel_spectrum(agg, channel, grid, true);
            const std::string name =
                preset + format_name("_zeta%g", zeta) + ".csv";
            io::write_file_atomic(out_dir / name, io::spectrum_to_csv(spec));
            entries.push_back(
                {{"zeta", zeta},
                 {"n_alpha", n_alpha},
                 {"weight", w},
                 {"features", features_to_json(analyze_features(agg, channel))},
                 {"output", name}});
        }
    } else {
        const double n_alpha = config.value("n_alpha_factor", 1.0) * n;
        for (const double phase_pi :
             config.at("phases_pi").get<std::vector<double>>()) {
            const double phase = phase_pi * M_PI;
            const double w = max_channel_weight(agg, n_alpha, phase);
            const ChannelSqueezing channel =
                ChannelSqueezing::pure(n_alpha, phase, w * agg.gamma);
            const SpectrumDecomposition spec =
                channel_spectrum(agg, channel, grid, true);
            const std::string name =
                preset + format_name("_phi%.2fpi", phase_pi) + ".csv";
            io::write_file_atomic(out_dir / name, io::spectrum_to_csv(spec));
            entries.push_back(
                {{"phase_pi", phase_pi},
                 {"n_alpha", n_alpha},
                 {"weight", w},
                 {"features", features_to_json(analyze_features(agg, channel))},
                 {"output", name}});
        }
    }

    RunResult r;
    r.summary = json{{"preset", preset},
                     {"aggregate", io::aggregate_to_json(agg)},
                     {"runs", entries}};
    io::write_file_atomic(out_dir / (preset + "_summary.json"),
                          r.summary.dump(2) + "\n");
    return r;
}

RunResult run_oracle_check(const json& config, const std::filesystem::path& out_dir) {
    const int num_sets = config.value("num_sets", 20);
    const std::uint64_t seed = config.value("seed", std::uint64_t{20250823});
    const double tau_tol = config.value("tau_tol", 1e-8);
    const double spectrum_tol = config.value("spectrum_tol", 1e-6);
    const bool mutate = config.value("mutate_gamma_plus", false);
    const DetuningGrid grid =
        io::grid_from_json(config.value("grid", json::object()));
    const std::vector<double> tau_grid = bloch::default_tau_grid();

    std::vector<ChannelSet> sets;
    if (config.contains("channel_sets")) {
        for (const auto& sj : config.at("channel_sets"))
            sets.push_back(io::channel_set_from_json(sj));
    } else {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < num_sets; ++i)
            sets.push_back(random_pure_channel_set(rng));
    }

    json report = json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const AggregateSqueezing agg = aggregate(sets[i]);
        AggregateSqueezing closed = agg;
        if (mutate) closed.gamma_plus *= 1.0 + 1e-3;
        const bloch::MasterEquationGenerator gen(agg);

        double corr_dev = 0.0;    // max over channels of |oracle-closed|/gamma_a
        double spec_dev = 0.0;
        for (const auto& raw : sets[i].channels) {
            const ChannelSqueezing channel = in_aggregate_convention(raw, agg);
            const CorrelationFunction ws =
                bloch::oracle_scattered(gen, channel.gamma_alpha, tau_grid);
            const CorrelationFunction wi =
                bloch::oracle_interference(gen, channel, tau_grid);
            for (std::size_t t = 0; t < tau_grid.size(); ++t) {
                const double ds = std::abs(
                    ws.values[t] -
                    w_scattered(closed, channel.gamma_alpha, tau_grid[t]));
                const double di = std::abs(
                    wi.values[t] - w_interference(closed, channel, tau_grid[t]));
                corr_dev =
                    std::max(corr_dev, std::max(ds, di) / channel.gamma_alpha);
            }

            const SpectrumDecomposition oracle =
                bloch::oracle_spectrum(gen, channel, grid, true);
            const SpectrumDecomposition closed_spec =
                channel_spectrum(closed, channel, grid, true);
            for (std::size_t p = 0; p < grid.detunings.size(); ++p)
                spec_dev = std::max(
                    spec_dev, std::abs(oracle.total[p] - closed_spec.total[p]));
        }

        char name[64];
        std::snprintf(name, sizeof(name), "set%02zu_correlators", i);
        const bool corr_pass = corr_dev < tau_tol;
        report.push_back({{"test", name},
                          {"max_dev", corr_dev},
                          {"tol", tau_tol},
                          {"pass", corr_pass}});
        std::snprintf(name, sizeof(name), "set%02zu_spectrum", i);
        const bool spec_pass = spec_dev < spectrum_tol;
        report.push_back({{"test", name},
                          {"max_dev", spec_dev},
                          {"tol", spectrum_tol},
                          {"pass", spec_pass}});
        all_pass = all_pass && corr_pass && spec_pass;
    }

    RunResult r;
    r.exit_code = all_pass ? exit_ok : exit_oracle_failure;
    r.summary = json{{"pass", all_pass}, {"results", report}};
    io::write_file_atomic(out_dir / "oracle_report.json", r.summary.dump(2) + "\n");
    return r;
}

json figure_preset(const std::string& name) {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    if (const char* env = std::getenv("SQSPEC_PRESET_DIR"))
        candidates.emplace_back(env);
#ifdef SQSPEC_PRESET_DIR
    candidates.emplace_back(SQSPEC_PRESET_DIR);
#endif
    for (const auto& dir : candidates) {
        const fs::path file = dir / (name + ".json");
        if (fs::exists(file)) {
            std::ifstream f(file);
            return json::parse(f);
        }
    }
    throw std::invalid_argument("figure_preset: no preset file for '" + name +
                                "' (set SQSPEC_PRESET_DIR)");
}

}  // namespace sqspec::cli
