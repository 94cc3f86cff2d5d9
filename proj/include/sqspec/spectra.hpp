// spectra.hpp — Stationary correlation functions of the outgoing channel
// field and their spectra, split into background / scattered / interference
// parts. All spectral values are reported in the 2*pi*S convention
// (a flat white-noise background of N_alpha photons reads N_alpha).

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sqspec/channels.hpp"

namespace sqspec {

struct DetuningGrid {
    std::vector<double> detunings;  // omega - omega0, units of gamma
    bool uniform{false};

    /// Strictly increasing uniform grid; defaults cover both Lorentzian
    /// widths at the figure parameters.
    static DetuningGrid make_uniform(double min = -8.0, double max = 8.0,
                                     std::size_t points = 2001);
    void validate() const;  // strictly increasing, finite, non-empty
};

struct SpectrumDecomposition {
    DetuningGrid grid;
    std::vector<double> background;
    std::vector<double> scattered;
    std::vector<double> interference;
    std::vector<double> total;  // background + scattered + interference
};

/// w(tau) = sum_k c_k exp(-r_k tau) on tau >= 0, Re r_k > 0.
struct ExponentialSum {
    std::vector<Complex> coefficients;
    std::vector<Complex> rates;

    Complex operator()(double tau) const;
    double slowest_decay() const;  // min over k of Re r_k
};

enum class CorrelationKind { scattered, interference, combined };

/// Two-time stationary correlation sampled on a tau grid. Values for
/// tau < 0 follow from w(-tau) = conj(w(tau)). When the correlation is an
/// exact sum of decaying exponentials, `modes` carries that representation.
struct CorrelationFunction {
    std::vector<double> tau_grid;
    std::vector<Complex> values;
    CorrelationKind kind{CorrelationKind::combined};
    std::optional<ExponentialSum> modes;
};

/// Scattered-light correlation (gamma_a/2)(N/(2N+1))(e^{-g+ tau} + e^{-g- tau}).
Complex w_scattered(const AggregateSqueezing& agg, double gamma_alpha, double tau);

/// Interference correlation for tau >= 0; the channel must be expressed in
/// the aggregate's phase convention.
Complex w_interference(const AggregateSqueezing& agg, const ChannelSqueezing& channel,
                       double tau);

/// Closed-form channel spectrum, decomposed. Background is the flat
/// N_alpha term (discrete channels only); pass include_background = false
/// for the continuum case handled by the plane-wave Poynting formulation.
SpectrumDecomposition channel_spectrum(const AggregateSqueezing& agg,
                                       const ChannelSqueezing& channel,
                                       const DetuningGrid& grid,
                                       bool include_background = true);

/// Spectrum of all modes: N + (M gamma/(2N+1)) (narrow - broad Lorentzian).
std::vector<double> total_spectrum(const AggregateSqueezing& agg,
                                   const DetuningGrid& grid);

/// Exact transform of an exponential sum:
///   2 pi S(D) = 2 Re sum_k c_k / (r_k + i D).
std::vector<double> spectrum_from_correlation(const ExponentialSum& w,
                                              const DetuningGrid& grid);

/// Numerical transform 2 Re int_0^inf e^{-i D tau} w(tau) dtau by adaptive
/// quadrature on [0, tau_max] with e^{-slowest_decay * tau_max} < 1e-12.
/// Throws std::invalid_argument when slowest_decay <= 0.
std::vector<double> spectrum_from_correlation(
    const std::function<Complex(double)>& w, double slowest_decay,
    const DetuningGrid& grid, double abs_tol = 1e-11);

/// Transform of a sampled correlation; requires the exponential-mode
/// representation to be attached.
std::vector<double> spectrum_from_correlation(const CorrelationFunction& w,
                                              const DetuningGrid& grid);

}  // namespace sqspec
