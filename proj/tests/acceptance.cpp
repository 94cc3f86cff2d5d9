// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "sqspec/bloch.hpp"
#include "sqspec/channels.hpp"
#include "sqspec/planewave.hpp"
#include "sqspec/runner.hpp"
#include "sqspec/spectra.hpp"

using namespace sqspec;
namespace pw = sqspec::planewave;

namespace {

int failures = 0;

void report(int id, const char* label, bool pass, double worst, double tol,
            double seconds) {
    std::printf("criterion %2d %-34s %s  (worst %.3e, tol %.1e, %.2fs)\n", id,
                label, pass ? "PASS" : "FAIL", worst, tol, seconds);
    if (!pass) ++failures;
}

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<ChannelSet> random_sets(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ChannelSet> sets;
    for (int i = 0; i < count; ++i)
        sets.push_back(cli::random_pure_channel_set(rng));
    return sets;
}

AggregateSqueezing caption_aggregate(double n, double m2_ratio) {
    AggregateSqueezing agg;
    agg.gamma = 1.0;
    agg.big_n = n;
    agg.big_m = std::sqrt(m2_ratio * n * (n + 1.0));
    agg.gamma_plus = agg.big_n + agg.big_m + 0.5;
    agg.gamma_minus = agg.big_n - agg.big_m + 0.5;
    return agg;
}

double central_excess(const AggregateSqueezing& agg, double n_alpha, double phase) {
    const double w = max_channel_weight(agg, n_alpha, phase);
    const ChannelSqueezing c = ChannelSqueezing::pure(n_alpha, phase, w);
    const DetuningGrid grid = DetuningGrid::make_uniform(-1.0, 1.0, 3);
    const SpectrumDecomposition s = channel_spectrum(agg, c, grid, true);
    return s.total[1] - s.background[1];
}

}  // namespace

int main() {
    const std::vector<ChannelSet> sets = random_sets(20, 42);
    const std::vector<double> tau_grid = bloch::default_tau_grid();
    const DetuningGrid grid = DetuningGrid::make_uniform();

    {  // 1: regression correlators vs closed forms
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const ChannelSet& set : sets) {
            const AggregateSqueezing agg = aggregate(set);
            const bloch::MasterEquationGenerator gen(agg);
            for (const ChannelSqueezing& raw : set.channels) {
                const ChannelSqueezing c = in_aggregate_convention(raw, agg);
                const CorrelationFunction ws =
                    bloch::oracle_scattered(gen, c.gamma_alpha, tau_grid);
                const CorrelationFunction wi =
                    bloch::oracle_interference(gen, c, tau_grid);
                for (std::size_t t = 0; t < tau_grid.size(); ++t) {
                    const double ds =
                        std::abs(ws.values[t] -
                                 w_scattered(agg, c.gamma_alpha, tau_grid[t]));
                    const double di = std::abs(
                        wi.values[t] - w_interference(agg, c, tau_grid[t]));
                    worst = std::max(worst, std::max(ds, di) / c.gamma_alpha);
                }
            }
        }
        const double secs = now_seconds(t0);
        report(1, "correlator oracle equivalence", worst < 1e-8 && secs < 30.0,
               worst, 1e-8, secs);
    }

    {  // 2: numerically transformed spectra vs closed forms
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const ChannelSet& set : sets) {
            const AggregateSqueezing agg = aggregate(set);
            const bloch::MasterEquationGenerator gen(agg);
            for (const ChannelSqueezing& raw : set.channels) {
                const ChannelSqueezing c = in_aggregate_convention(raw, agg);
                const SpectrumDecomposition oracle =
                    bloch::oracle_spectrum(gen, c, grid);
                const SpectrumDecomposition closed = channel_spectrum(agg, c, grid);
                for (std::size_t i = 0; i < grid.detunings.size(); ++i)
                    worst = std::max(worst,
                                     std::abs(oracle.total[i] - closed.total[i]));
            }
        }
        const double secs = now_seconds(t0);
        report(2, "spectrum oracle equivalence", worst < 1e-6 && secs < 60.0,
               worst, 1e-6, secs);
    }

    {  // 3: coherence decay eigenvalues
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> n_dist(0.0, 8.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const double n = n_dist(rng);
            const double m = unit(rng) * std::sqrt(n * (n + 1.0));
            const AggregateSqueezing agg = caption_aggregate(
                n, n > 0.0 ? m * m / (n * (n + 1.0)) : 0.0);
            const auto rates =
                bloch::MasterEquationGenerator(agg).coherence_decay_rates();
            worst = std::max(worst, std::abs(rates[0] - agg.gamma_minus));
            worst = std::max(worst, std::abs(rates[1] - agg.gamma_plus));
        }
        report(3, "decay eigenvalues gamma_pm", worst < 1e-10, worst, 1e-10,
               now_seconds(t0));
    }

    {  // 4: stationary excitation N/(2N+1), independent of M
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(44);
        std::uniform_real_distribution<double> n_dist(0.0, 8.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 30; ++k) {
            const double n = n_dist(rng);
            for (int j = 0; j < 3; ++j) {
                const double m = unit(rng) * std::sqrt(n * (n + 1.0));
                const AggregateSqueezing agg = caption_aggregate(
                    n, n > 0.0 ? m * m / (n * (n + 1.0)) : 0.0);
                const bloch::MasterEquationGenerator gen(agg);
                const double excitation =
                    bloch::stationary_state(gen).v(2).real();
                worst = std::max(worst,
                                 std::abs(excitation - n / (2.0 * n + 1.0)));
            }
        }
        report(4, "stationary excitation", worst < 1e-10, worst, 1e-10,
               now_seconds(t0));
    }

    {  // 5: channel spectra sum to the all-mode spectrum (flat parts
       //    compared through the aggregate N)
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        const DetuningGrid g5 = DetuningGrid::make_uniform(-8.0, 8.0, 401);
        for (const ChannelSet& set : sets) {
            const AggregateSqueezing agg = aggregate(set);
            const std::vector<double> tot = total_spectrum(agg, g5);
            std::vector<double> sum(g5.detunings.size(), agg.big_n);
            for (const ChannelSqueezing& raw : set.channels) {
                const SpectrumDecomposition s = channel_spectrum(
                    agg, in_aggregate_convention(raw, agg), g5, false);
                for (std::size_t i = 0; i < sum.size(); ++i)
                    sum[i] += s.total[i];
            }
            for (std::size_t i = 0; i < sum.size(); ++i)
                worst = std::max(worst, std::abs(sum[i] - tot[i]));
        }
        report(5, "sum law over channels", worst < 1e-12, worst, 1e-12,
               now_seconds(t0));
    }

    {  // 6: moment bound saturation iff uniform
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(46);
        std::uniform_real_distribution<double> n_dist(0.05, 8.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> coupling(0.1, 1.0);
        double worst = 0.0;
        bool strict = true;
        for (int k = 0; k < 40; ++k) {
            const double n = n_dist(rng);
            const double phi = phase(rng);
            ChannelSet uniform;
            for (int j = 0; j < 3; ++j)
                uniform.channels.push_back(
                    ChannelSqueezing::pure(n, phi, coupling(rng)));
            const AggregateSqueezing agg = aggregate(uniform);
            worst = std::max(
                worst, std::abs(agg.big_m * agg.big_m -
                                agg.big_n * (agg.big_n + 1.0)) /
                           (1.0 + agg.big_n * agg.big_n));
            ChannelSet skew = uniform;
            skew.channels[0].m_alpha *= std::polar(1.0, 1e-3);
            const AggregateSqueezing pert = aggregate(skew);
            strict = strict && pert.big_m * pert.big_m < agg.big_m * agg.big_m;
        }
        report(6, "equality condition", worst < 1e-12 && strict, worst, 1e-12,
               now_seconds(t0));
    }

    {  // 7: mirror symmetry laws
        const auto t0 = std::chrono::steady_clock::now();
        const AggregateSqueezing agg = caption_aggregate(0.25, 0.75);
        const DetuningGrid g7 = DetuningGrid::make_uniform(-6.0, 6.0, 601);
        double worst = 0.0;
        for (double phi : {0.0, 0.7, 1.9, M_PI}) {
            const SpectrumDecomposition a = channel_spectrum(
                agg, ChannelSqueezing::pure(0.3, phi, 0.2), g7, true);
            const SpectrumDecomposition b = channel_spectrum(
                agg, ChannelSqueezing::pure(0.3, 2.0 * M_PI - phi, 0.2), g7,
                true);
            for (std::size_t i = 0; i < g7.detunings.size(); ++i) {
                const std::size_t j = g7.detunings.size() - 1 - i;
                worst = std::max(worst, std::abs(a.total[i] - b.total[j]));
                if (phi == 0.0 || phi == M_PI)  // Im M_alpha = 0 cases
                    worst = std::max(worst, std::abs(a.total[i] - a.total[j]));
            }
        }
        report(7, "mirror symmetry laws", worst < 1e-12, worst, 1e-12,
               now_seconds(t0));
    }

    {  // 8: phase sweep of the caption preset
        const auto t0 = std::chrono::steady_clock::now();
        const AggregateSqueezing agg = caption_aggregate(0.25, 0.75);
        const DetuningGrid g8 = DetuningGrid::make_uniform(-8.0, 8.0, 2001);
        bool pass = true;
        double worst = 0.0;

        pass = pass && central_excess(agg, 0.25, 0.0) > 0.0;
        pass = pass && central_excess(agg, 0.25, M_PI) < 0.0;

        const double w_quad = max_channel_weight(agg, 0.25, M_PI / 2.0);
        const SpectrumDecomposition quad = channel_spectrum(
            agg, ChannelSqueezing::pure(0.25, M_PI / 2.0, w_quad), g8, true);
        double even = 0.0, odd = 0.0;
        const std::size_t c = g8.detunings.size() / 2;
        for (std::size_t i = 1; i <= c; ++i) {
            const double hi = quad.total[c + i] - quad.background[c + i];
            const double lo = quad.total[c - i] - quad.background[c - i];
            even = std::max(even, std::abs(hi + lo) / 2.0);
            odd = std::max(odd, std::abs(hi - lo) / 2.0);
        }
        worst = even;
        pass = pass && even < 1e-9 && odd > 1e-6;
        const double secs = now_seconds(t0);
        report(8, "phase-sweep lineshapes", pass && secs < 5.0, worst, 1e-9,
               secs);
    }

    {  // 9: larger channel photon number attenuates the central value
        const auto t0 = std::chrono::steady_clock::now();
        const AggregateSqueezing agg = caption_aggregate(0.25, 0.75);
        bool pass = true;
        double worst = -1e300;
        for (double phase_pi : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double narrow = central_excess(agg, 0.25, phase_pi * M_PI);
            const double wide = central_excess(agg, 2.0, phase_pi * M_PI);
            pass = pass && wide < narrow;
            worst = std::max(worst, wide - narrow);
        }
        report(9, "central-value attenuation", pass, worst, 0.0,
               now_seconds(t0));
    }

    {  // 10: hole burning with the secondary extremum vanishing at zeta = 0
        const auto t0 = std::chrono::steady_clock::now();
        const AggregateSqueezing agg = caption_aggregate(5.0, 0.98);
        auto features_at = [&](double zeta) {
            const double n_alpha = (1.0 + zeta / 1000.0) * 25.0 / 11.0;
            const double w = max_channel_weight(agg, n_alpha, M_PI);
            return cli::analyze_features(
                agg, ChannelSqueezing::pure(n_alpha, M_PI, w));
        };
        const cli::SpectrumFeatures at0 = features_at(0.0);
        const cli::SpectrumFeatures at1 = features_at(1.0);
        const cli::SpectrumFeatures at2 = features_at(2.0);
        const bool pass = !at0.secondary_extrema && !at0.central_hole &&
                          at1.secondary_extrema && at1.central_hole &&
                          at2.secondary_extrema && at2.central_hole &&
                          at1.central_dip;
        report(10, "hole burning and pimple", pass,
               static_cast<double>(at1.extremum_count), 3.0, now_seconds(t0));
    }

    {  // 11: sphere quadrature accuracy
        const auto t0 = std::chrono::steady_clock::now();
        pw::AtomDipole dipole;
        dipole.d_hat = Eigen::Vector3d{0.2, 0.3, 1.0}.normalized();
        const AggregateSqueezing uni = pw::aggregate_from_sphere(
            dipole, pw::DirectionalSqueezing::uniform(0.8, 0.3), 8);
        double worst = std::abs(uni.big_n - 0.8);
        worst = std::max(worst, std::abs(uni.big_m - std::sqrt(0.8 * 1.8)));
        bool pass = worst < 1e-12;

        pw::AtomDipole aligned;  // d along z, cone along z
        double cone_worst = 0.0;
        for (double theta_c : {0.5, 1.2}) {
            const AggregateSqueezing cone = pw::aggregate_from_sphere(
                aligned,
                pw::DirectionalSqueezing::cone(Eigen::Vector3d::UnitZ(),
                                               theta_c, 1.5, 0.0),
                64);
            const double cth = std::cos(theta_c);
            const double ref =
                (3.0 * 1.5 / 4.0) *
                ((1.0 - cth) - (1.0 - cth * cth * cth) / 3.0);
            cone_worst = std::max(cone_worst, std::abs(cone.big_n - ref));
        }
        pass = pass && cone_worst < 1e-8;
        report(11, "sphere quadrature", pass, std::max(worst, cone_worst),
               1e-8, now_seconds(t0));
    }

    {  // 12: interference confined to the squeezing cone
        const auto t0 = std::chrono::steady_clock::now();
        pw::AtomDipole dipole;
        const pw::DirectionalSqueezing sq = pw::DirectionalSqueezing::cone(
            Eigen::Vector3d::UnitX(), 0.5, 1.0, 0.0);
        const AggregateSqueezing agg = pw::aggregate_from_sphere(dipole, sq, 64);
        const DetuningGrid g12 = DetuningGrid::make_uniform(-4.0, 4.0, 81);

        pw::DetectorGeometry outside;
        outside.r0 = Eigen::Vector3d{0.0, 5.0, 0.0};
        outside.area_vector = Eigen::Vector3d{0.0, 0.01, 0.0};
        const SpectrumDecomposition out =
            pw::direction_spectrum(dipole, sq, outside, agg, g12, 64);
        double out_max = 0.0;
        for (const double v : out.interference)
            out_max = std::max(out_max, std::abs(v));

        pw::DetectorGeometry inside;
        inside.r0 = Eigen::Vector3d{5.0, 0.0, 0.0};
        inside.area_vector = Eigen::Vector3d{0.01, 0.0, 0.0};
        const SpectrumDecomposition in =
            pw::direction_spectrum(dipole, sq, inside, agg, g12, 64);
        double in_max = 0.0;
        for (const double v : in.interference)
            in_max = std::max(in_max, std::abs(v));

        report(12, "squeezing-cone confinement", out_max == 0.0 && in_max > 0.0,
               out_max, 0.0, now_seconds(t0));
    }

    {  // 13: detector geometry scaling laws
        const auto t0 = std::chrono::steady_clock::now();
        pw::AtomDipole dipole;
        const pw::DirectionalSqueezing sq =
            pw::DirectionalSqueezing::uniform(0.4, 0.7);
        const AggregateSqueezing agg = pw::aggregate_from_sphere(dipole, sq, 32);
        const DetuningGrid g13 = DetuningGrid::make_uniform(-3.0, 3.0, 61);

        pw::DetectorGeometry det;
        det.r0 = Eigen::Vector3d{2.0, 1.0, 0.3};
        det.area_vector = Eigen::Vector3d{0.02, 0.01, 0.0};
        pw::DetectorGeometry far = det;
        far.r0 *= 3.0;
        pw::DetectorGeometry tilted = det;
        tilted.area_vector *= 2.5;

        const SpectrumDecomposition a =
            pw::direction_spectrum(dipole, sq, det, agg, g13, 32);
        const SpectrumDecomposition b =
            pw::direction_spectrum(dipole, sq, far, agg, g13, 32);
        const SpectrumDecomposition c =
            pw::direction_spectrum(dipole, sq, tilted, agg, g13, 32);
        double scale = 0.0;
        for (std::size_t i = 0; i < g13.detunings.size(); ++i)
            scale = std::max(scale, std::abs(a.scattered[i]) +
                                        std::abs(a.interference[i]));
        double worst = 0.0;
        for (std::size_t i = 0; i < g13.detunings.size(); ++i) {
            worst = std::max(worst,
                             std::abs(9.0 * b.scattered[i] - a.scattered[i]));
            worst = std::max(
                worst, std::abs(9.0 * b.interference[i] - a.interference[i]));
            worst = std::max(worst,
                             std::abs(c.scattered[i] - 2.5 * a.scattered[i]));
            worst = std::max(
                worst, std::abs(c.interference[i] - 2.5 * a.interference[i]));
        }
        worst /= scale;

        pw::DetectorGeometry axial;
        axial.r0 = Eigen::Vector3d{0.0, 0.0, 6.0};
        axial.area_vector = Eigen::Vector3d{0.0, 0.0, 0.02};
        const SpectrumDecomposition dark =
            pw::direction_spectrum(dipole, sq, axial, agg, g13, 32);
        double dark_max = 0.0;
        for (std::size_t i = 0; i < g13.detunings.size(); ++i)
            dark_max = std::max(dark_max, std::abs(dark.scattered[i]) +
                                              std::abs(dark.interference[i]));
        report(13, "detector geometry scaling", worst < 1e-12 && dark_max < 1e-15,
               worst, 1e-12, now_seconds(t0));
    }

    {  // 14: two-term narrow-linewidth expansion; residual decays as 1/N^2
       //    (the scaled product converges upward to m/16, so boundedness is
       //    asserted for the product and monotone decay for the residual)
        const auto t0 = std::chrono::steady_clock::now();
        const double m = std::sqrt(0.98);
        double prev = 1e300;
        double worst = 0.0;
        bool pass = true;
        for (double n : {10.0, 100.0, 1000.0}) {
            const LinewidthPair p = linewidth_expansion(n, m);
            const double residual = std::abs(p.exact - p.asymptotic);
            pass = pass && residual < prev;
            worst = std::max(worst, residual * n * n);
            prev = residual;
        }
        pass = pass && worst <= m / 16.0 + 1e-9;
        report(14, "narrow-linewidth asymptotics", pass, worst, m / 16.0,
               now_seconds(t0));
    }

    if (failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
