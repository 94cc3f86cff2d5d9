// channels.hpp — Multi-channel squeezing parameters: per-channel moments,
// aggregation into the master-equation parameters (gamma, M, N, gamma±),
// feasibility constraints and the channel-weight solver.

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace sqspec {

using Complex = std::complex<double>;

/// Thrown when a requested (N, M) combination cannot be realized by any
/// channel decomposition (|M|^2 > N(N+1), or no remainder channel exists).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One squeezed reservoir channel: mean photon number N_a, squeezing
/// moment M_a and coupling rate gamma_a. Pure channels satisfy
/// |M_a|^2 = N_a (N_a + 1); mixed ones |M_a|^2 <= N_a (N_a + 1).
struct ChannelSqueezing {
    double n_alpha{0.0};
    Complex m_alpha{0.0, 0.0};
    double gamma_alpha{0.0};

    /// Pure channel with |M_a| = sqrt(N_a (N_a + 1)) and arg M_a = phase.
    static ChannelSqueezing pure(double n, double phase, double gamma);
};

/// Effective single-reservoir parameters entering the master equation.
/// Phase convention: big_m is real and nonnegative; phase_rotation is the
/// angle subtracted from every channel's arg M_a to get there.
struct AggregateSqueezing {
    double gamma{1.0};
    double big_m{0.0};
    double big_n{0.0};
    double gamma_plus{0.5};
    double gamma_minus{0.5};
    double phase_rotation{0.0};
};

struct ChannelSet {
    std::vector<ChannelSqueezing> channels;
};

struct ValidationReport {
    bool pass_pure{false};
    bool pass_mixed{false};
    double defect{0.0};  // |M_a|^2 - N_a (N_a + 1)
};

/// gamma = sum gamma_a, M = |sum (gamma_a/gamma) M_a|, N = sum (gamma_a/gamma) N_a,
/// gamma± = (N ± M + 1/2) gamma. Throws std::invalid_argument on an empty set,
/// all-zero couplings, or negative channel parameters.
AggregateSqueezing aggregate(const ChannelSet& set);

/// Channel expressed in the aggregate's phase convention (M_a rotated by
/// exp(-i phase_rotation)).
ChannelSqueezing in_aggregate_convention(const ChannelSqueezing& c,
                                         const AggregateSqueezing& agg);

/// Pure/mixed moment constraint check within absolute tolerance tol.
ValidationReport validate_channel(const ChannelSqueezing& c, bool pure, double tol);

/// Largest weight w = gamma_a/gamma of a pure channel (N_a = channel_n,
/// arg M_a = channel_phase) such that the remaining weight 1 - w can carry
/// the rest of the target aggregate as one effective mixed reservoir:
///   N - w N_a >= 0  and  |M - w M_a|^2 <= (N - w N_a)(N - w N_a + 1 - w).
/// Solved by bisection to absolute tolerance 1e-12 in w.
/// Throws InfeasibleError when even w = 0 violates |M|^2 <= N(N+1).
double max_channel_weight(const AggregateSqueezing& target, double channel_n,
                          double channel_phase);

struct LinewidthPair {
    double exact{0.0};       // (N - m sqrt(N(N+1)) + 1/2) gamma
    double asymptotic{0.0};  // ((N + 1/2)(1 - m) + m / 8N) gamma
};

/// Narrow-linewidth rate gamma_- at fixed ratio m = M / sqrt(N(N+1)),
/// exact and in the two-term large-N expansion (gamma = 1 units).
LinewidthPair linewidth_expansion(double n, double m_ratio);

}  // namespace sqspec
