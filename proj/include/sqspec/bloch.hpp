// bloch.hpp — Independent numerical oracle: the two-level master equation
// in squeezed vacuum, its stationary state, quantum-regression two-time
// correlators and numerically transformed spectra. Built only from the
// master-equation generator and channel data; the closed-form correlation
// expressions of spectra.hpp are never used here.

#pragma once

#include <array>

#include <Eigen/Dense>

#include "sqspec/channels.hpp"
#include "sqspec/spectra.hpp"

namespace sqspec::bloch {

enum class AtomicOp { sigma_plus, sigma_minus };

/// Ordering of the two operators in a two-time average; `late_early` means
/// <A(t+tau) B(t)>, `early_late` means <B(t) A(t+tau)>.
enum class Ordering { late_early, early_late };

/// Atomic expectation vector (<sigma->, <sigma+>, <sigma+ sigma->).
struct BlochState {
    Eigen::Vector3cd v{Eigen::Vector3cd::Zero()};
    double time{0.0};
};

/// Liouvillian of
///   rho' = gamma (N+1) D[sigma-] rho + gamma N D[sigma+] rho
///          - gamma M sigma+ rho sigma+ - gamma M* sigma- rho sigma-
/// acting on vec(rho), column-major, basis {|e>, |g>}. Immutable after
/// construction; the eigendecomposition is cached for propagators and
/// exponential-mode extraction.
class MasterEquationGenerator {
public:
    explicit MasterEquationGenerator(const AggregateSqueezing& agg);

    const AggregateSqueezing& aggregate() const { return agg_; }
    const Eigen::Matrix4cd& liouvillian() const { return liou_; }

    Eigen::Matrix4cd propagator(double tau) const;  // exp(L tau)

    /// Decay rates {slower, faster} of the coherence (sigma-/sigma+) sector,
    /// which equal {gamma-, gamma+}.
    std::array<double, 2> coherence_decay_rates() const;

    /// Adaptive RK (Dormand-Prince 5(4)) integration of x' = L x from
    /// (t0, x0) to t1, rel tol 1e-10, abs tol 1e-12.
    Eigen::Vector4cd evolve(const Eigen::Vector4cd& x0, double t0, double t1) const;

    /// <A exp(L tau) X0> as an exact exponential sum in tau, via the cached
    /// eigendecomposition.
    ExponentialSum trace_modes(const Eigen::Matrix2cd& readout,
                               const Eigen::Matrix2cd& x0) const;

private:
    AggregateSqueezing agg_;
    Eigen::Matrix4cd liou_;
    Eigen::Matrix4cd vecs_;
    Eigen::Matrix4cd vecs_inv_;
    Eigen::Vector4cd vals_;
};

Eigen::Matrix2cd sigma_plus();
Eigen::Matrix2cd sigma_minus();
Eigen::Matrix2cd atomic_op(AtomicOp tag);

/// Density matrix of the unique fixed point. Throws std::domain_error when
/// gamma_- <= 0 (non-mixing generator).
Eigen::Matrix2cd stationary_density(const MasterEquationGenerator& gen);
BlochState stationary_state(const MasterEquationGenerator& gen);

/// Quantum-regression two-time correlator on a tau >= 0 grid. Sampled
/// values come from RK integration of the operator-modified state; the
/// attached modes come from the matrix-exponential path.
CorrelationFunction regression_correlator(const MasterEquationGenerator& gen,
                                          AtomicOp late, AtomicOp early,
                                          const std::vector<double>& tau_grid,
                                          Ordering ordering = Ordering::late_early);

/// Interference correlation w^I(tau) assembled from the mixed-correlator
/// reduction: for tau >= 0 only <sigma+_{t+tau} b(t)> contributes and
///   w^I = gamma_a ( N_a <[s+_{t+tau}, s-_t]> - M_a <[s+_{t+tau}, s+_t]> ).
/// The channel must be in the aggregate's phase convention.
CorrelationFunction oracle_interference(const MasterEquationGenerator& gen,
                                        const ChannelSqueezing& channel,
                                        const std::vector<double>& tau_grid);

/// Scattered correlation w^S(tau) = gamma_a <sigma+_{t+tau} sigma-_t>.
CorrelationFunction oracle_scattered(const MasterEquationGenerator& gen,
                                     double gamma_alpha,
                                     const std::vector<double>& tau_grid);

/// Full spectrum decomposition from the oracle correlators, transformed via
/// spectrum_from_correlation on their exponential-mode representation.
SpectrumDecomposition oracle_spectrum(const MasterEquationGenerator& gen,
                                      const ChannelSqueezing& channel,
                                      const DetuningGrid& grid,
                                      bool include_background = true);

/// Default tau grid: 400 log-spaced points on [1e-3, 15]/gamma plus tau = 0.
std::vector<double> default_tau_grid(double gamma = 1.0);

}  // namespace sqspec::bloch
