// planewave.hpp — Plane-wave channels: dipole couplings, polarization
// triads, sphere-quadrature aggregation of the directional squeezing
// profile, and the direction-resolved Poynting spectrum at a detector.
// Default units: hbar*omega0 = 1, lambda0 = 1, gamma = 1.

#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "sqspec/channels.hpp"
#include "sqspec/spectra.hpp"

namespace sqspec::planewave {

struct AtomDipole {
    Eigen::Vector3d d_hat{0.0, 0.0, 1.0};  // unit dipole orientation
    double gamma_total{1.0};               // Einstein A coefficient
    double omega0{1.0};
    double lambda0{1.0};  // transition wavelength, background prefactor only
};

/// gamma = omega0^3 |d|^2 / (3 pi eps0 hbar c^3).
struct RadiationConstants {
    double hbar{1.054571817e-34};
    double eps0{8.8541878128e-12};
    double c{2.99792458e8};
};
double einstein_a_coefficient(double omega0, double dipole_moment,
                              const RadiationConstants& k = {});

struct PolarizationPair {
    Eigen::Vector3d eps1;
    Eigen::Vector3d eps2;
};

/// Deterministic right-handed triad {eps1, eps2, k_hat}:
/// eps1 = normalize(z x k_hat), falling back to the x axis at the poles;
/// eps2 = k_hat x eps1. Throws on a zero input vector.
PolarizationPair polarization_basis(const Eigen::Vector3d& k_hat);

struct SqueezingSample {
    double n{0.0};
    Complex m{0.0, 0.0};
};

/// Direction- and polarization-resolved squeezing profile, pure pointwise:
/// |M_{k,l}|^2 = N_{k,l} (N_{k,l} + 1).
struct DirectionalSqueezing {
    enum class Kind { uniform, cone, custom };

    Kind kind{Kind::uniform};
    double n0{0.0};
    double arg_m0{0.0};
    Eigen::Vector3d cone_axis{0.0, 0.0, 1.0};
    double cone_half_angle{0.0};
    double edge_smoothing{0.0};  // 0 = hard indicator edge
    std::function<SqueezingSample(const Eigen::Vector3d&, int)> custom;

    SqueezingSample sample(const Eigen::Vector3d& k_hat, int lambda) const;

    static DirectionalSqueezing uniform(double n0, double arg_m0 = 0.0);
    static DirectionalSqueezing cone(const Eigen::Vector3d& axis, double half_angle,
                                     double n0, double arg_m0 = 0.0,
                                     double smoothing = 0.0);
    static DirectionalSqueezing custom_profile(
        std::function<SqueezingSample(const Eigen::Vector3d&, int)> f);
};

struct DetectorGeometry {
    Eigen::Vector3d r0{1.0, 0.0, 0.0};         // detector position
    Eigen::Vector3d area_vector{1.0, 0.0, 0.0};  // oriented area A

    Eigen::Vector3d r_hat() const;
};

struct AnalyzerCone {
    Eigen::Vector3d axis{0.0, 0.0, 1.0};
    double half_angle{M_PI};  // full sphere by default
};

/// Dipole-pattern sphere averages
///   M = (3/8pi) int d2k sum_l |eps_l . d|^2 M_{k,l},  likewise N,
/// by Gauss-Legendre in cos(theta) x uniform trapezoid in phi. Cone
/// profiles are integrated with the polar axis along the cone axis and the
/// cos(theta) interval split at the edge.
AggregateSqueezing aggregate_from_sphere(const AtomDipole& dipole,
                                         const DirectionalSqueezing& sq, int order);

/// Geometric factor 3 (A . r_hat) / (8 pi r^2) shared by the scattered and
/// interference parts.
double geometric_prefactor(const DetectorGeometry& det);

/// Spectrally resolved energy flux through the detector, decomposed, in
/// units of hbar*omega0 and the 2*pi*S convention. The background is the
/// frequency-flat Poynting flux of the incident squeezing, optionally
/// restricted to an analyzer cone in k space.
SpectrumDecomposition direction_spectrum(
    const AtomDipole& dipole, const DirectionalSqueezing& sq,
    const DetectorGeometry& det, const AggregateSqueezing& agg,
    const DetuningGrid& grid, int quadrature_order = 64,
    const std::optional<AnalyzerCone>& analyzer = std::nullopt);

/// Single-polarization part; lambda in {1, 2}. The two polarizations sum
/// to direction_spectrum pointwise (background split by the polarization
/// index of the flux integrand).
SpectrumDecomposition fixed_polarization_spectrum(
    const AtomDipole& dipole, const DirectionalSqueezing& sq,
    const DetectorGeometry& det, const AggregateSqueezing& agg,
    const DetuningGrid& grid, int lambda, int quadrature_order = 64,
    const std::optional<AnalyzerCone>& analyzer = std::nullopt);

}  // namespace sqspec::planewave
