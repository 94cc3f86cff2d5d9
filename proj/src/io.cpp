#include "sqspec/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sqspec::io {

namespace {

Eigen::Vector3d vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

ChannelSet channel_set_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.at("channels");
    if (!arr.is_array())
        throw std::invalid_argument("channel set: expected an array of channels");

    ChannelSet set;
    for (const auto& cj : arr) {
        ChannelSqueezing c;
        c.n_alpha = cj.at("n_alpha").get<double>();
        c.gamma_alpha = cj.at("gamma_alpha").get<double>();
        const json& m = cj.at("m_alpha");
        if (m.is_array() && m.size() == 2)
            c.m_alpha = Complex(m[0].get<double>(), m[1].get<double>());
        else if (m.is_number())
            c.m_alpha = Complex(m.get<double>(), 0.0);
        else
            throw std::invalid_argument("channel set: m_alpha must be [re, im]");
        set.channels.push_back(c);
    }
    return set;
}

json channel_set_to_json(const ChannelSet& set) {
    json arr = json::array();
    for (const auto& c : set.channels)
        arr.push_back({{"n_alpha", c.n_alpha},
                       {"m_alpha", {c.m_alpha.real(), c.m_alpha.imag()}},
                       {"gamma_alpha", c.gamma_alpha}});
    return json{{"channels", arr}};
}

json aggregate_to_json(const AggregateSqueezing& agg) {
    return json{{"gamma", agg.gamma},
                {"big_m", agg.big_m},
                {"big_n", agg.big_n},
                {"gamma_plus", agg.gamma_plus},
                {"gamma_minus", agg.gamma_minus},
                {"phase_rotation", agg.phase_rotation}};
}

Scene scene_from_json(const json& j) {
    Scene scene;

    const json& dj = j.at("dipole");
    scene.dipole.d_hat = vec3_from_json(dj.at("d_hat")).normalized();
    scene.dipole.gamma_total = dj.value("gamma", 1.0);
    scene.dipole.omega0 = dj.value("omega0", 1.0);
    scene.dipole.lambda0 = dj.value("lambda0", 1.0);
    if (dj.contains("si")) {
        const json& si = dj.at("si");
        planewave::RadiationConstants k;
        k.hbar = si.value("hbar", k.hbar);
        k.eps0 = si.value("eps0", k.eps0);
        k.c = si.value("c", k.c);
        scene.dipole.omega0 = si.at("omega0").get<double>();
        scene.dipole.gamma_total = planewave::einstein_a_coefficient(
            scene.dipole.omega0, si.at("dipole_moment").get<double>(), k);
        scene.dipole.lambda0 = 2.0 * M_PI * k.c / scene.dipole.omega0;
    }

    const json& det = j.at("detector");
    scene.detector.r0 = vec3_from_json(det.at("r0"));
    scene.detector.area_vector = vec3_from_json(det.at("area_vector"));

    const json& pj = j.at("profile");
    const std::string kind = pj.at("kind").get<std::string>();
    if (kind == "uniform") {
        scene.profile = planewave::DirectionalSqueezing::uniform(
            pj.at("n0").get<double>(), pj.value("arg_m0", 0.0));
    } else if (kind == "cone") {
        scene.profile = planewave::DirectionalSqueezing::cone(
            vec3_from_json(pj.at("axis")), pj.at("half_angle").get<double>(),
            pj.at("n0").get<double>(), pj.value("arg_m0", 0.0),
            pj.value("smoothing", 0.0));
    } else if (kind == "grid") {
        // Tabulated (theta, phi, lambda) -> (N, arg M), nearest-neighbor lookup.
        struct Sample {
            Eigen::Vector3d k_hat;
            int lambda;
            double n;
            double arg_m;
        };
        auto samples = std::make_shared<std::vector<Sample>>();
        for (const auto& sj : pj.at("samples")) {
            const double th = sj.at("theta").get<double>();
            const double ph = sj.at("phi").get<double>();
            samples->push_back({{std::sin(th) * std::cos(ph),
                                 std::sin(th) * std::sin(ph), std::cos(th)},
                                sj.value("lambda", 0),
                                sj.at("n").get<double>(),
                                sj.value("arg_m", 0.0)});
        }
        if (samples->empty())
            throw std::invalid_argument("grid profile: no samples");
        scene.profile = planewave::DirectionalSqueezing::custom_profile(
            [samples](const Eigen::Vector3d& k_hat, int lambda) {
                double best = -2.0;
                const Sample* pick = nullptr;
                for (const auto& s : *samples) {
                    if (s.lambda != 0 && s.lambda != lambda) continue;
                    const double c = s.k_hat.dot(k_hat);
                    if (c > best) {
                        best = c;
                        pick = &s;
                    }
                }
                if (!pick) return planewave::SqueezingSample{};
                return planewave::SqueezingSample{
                    pick->n,
                    std::polar(std::sqrt(pick->n * (pick->n + 1.0)), pick->arg_m)};
            });
    } else {
        throw std::invalid_argument("profile kind must be uniform, cone or grid");
    }

    scene.quadrature_order = j.value("quadrature_order", 64);
    if (j.contains("analyzer_cone")) {
        planewave::AnalyzerCone cone;
        cone.axis = vec3_from_json(j.at("analyzer_cone").at("axis")).normalized();
        cone.half_angle = j.at("analyzer_cone").at("half_angle").get<double>();
        scene.analyzer = cone;
    }
    return scene;
}

DetuningGrid grid_from_json(const json& j) {
    return DetuningGrid::make_uniform(j.value("min", -8.0), j.value("max", 8.0),
                                      j.value("points", std::size_t{2001}));
}

std::string spectrum_to_csv(const SpectrumDecomposition& spec,
                            const std::optional<double>& geometric_prefactor) {
    std::string out;
    out.reserve(spec.grid.detunings.size() * 96 + 128);
    char line[256];
    if (geometric_prefactor) {
        std::snprintf(line, sizeof(line), "# geometric_prefactor=%.17g\n",
                      *geometric_prefactor);
        out += line;
    }
    out += "detuning,background,scattered,interference,total\n";
    for (std::size_t i = 0; i < spec.grid.detunings.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      spec.grid.detunings[i], spec.background[i], spec.scattered[i],
                      spec.interference[i], spec.total[i]);
        out += line;
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << content;
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace sqspec::io
