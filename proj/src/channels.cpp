#include "sqspec/channels.hpp"

#include <cmath>

namespace sqspec {

ChannelSqueezing ChannelSqueezing::pure(double n, double phase, double gamma) {
    if (n < 0.0) throw std::invalid_argument("ChannelSqueezing::pure: n < 0");
    return {n, std::polar(std::sqrt(n * (n + 1.0)), phase), gamma};
}

AggregateSqueezing aggregate(const ChannelSet& set) {
    if (set.channels.empty())
        throw std::invalid_argument("aggregate: empty channel set");

    double gamma = 0.0;
    for (const auto& c : set.channels) {
        if (c.n_alpha < 0.0)
            throw std::invalid_argument("aggregate: negative N_alpha");
        if (c.gamma_alpha < 0.0)
            throw std::invalid_argument("aggregate: negative gamma_alpha");
        gamma += c.gamma_alpha;
    }
    if (gamma <= 0.0)
        throw std::invalid_argument("aggregate: all channel couplings are zero");

    Complex m_sum{0.0, 0.0};
    double n_sum = 0.0;
    for (const auto& c : set.channels) {
        const double w = c.gamma_alpha / gamma;
        m_sum += w * c.m_alpha;
        n_sum += w * c.n_alpha;
    }

    AggregateSqueezing agg;
    agg.gamma = gamma;
    agg.big_m = std::abs(m_sum);
    agg.big_n = n_sum;
    agg.phase_rotation = (agg.big_m > 0.0) ? std::arg(m_sum) : 0.0;
    agg.gamma_plus = (agg.big_n + agg.big_m + 0.5) * gamma;
    agg.gamma_minus = (agg.big_n - agg.big_m + 0.5) * gamma;
    return agg;
}

ChannelSqueezing in_aggregate_convention(const ChannelSqueezing& c,
                                         const AggregateSqueezing& agg) {
    ChannelSqueezing out = c;
    out.m_alpha = c.m_alpha * std::polar(1.0, -agg.phase_rotation);
    return out;
}

ValidationReport validate_channel(const ChannelSqueezing& c, bool pure, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("validate_channel: tol <= 0");
    if (c.n_alpha < 0.0)
        throw std::invalid_argument("validate_channel: negative N_alpha");
    if (c.gamma_alpha < 0.0)
        throw std::invalid_argument("validate_channel: negative gamma_alpha");

    ValidationReport r;
    r.defect = std::norm(c.m_alpha) - c.n_alpha * (c.n_alpha + 1.0);
    r.pass_pure = std::abs(r.defect) <= tol;
    r.pass_mixed = r.defect <= tol;
    if (!pure) r.pass_pure = r.pass_pure && r.pass_mixed;
    return r;
}

namespace {

// Remainder feasibility of weight w for a pure channel against the target.
bool weight_feasible(const AggregateSqueezing& t, const Complex& m_alpha,
                     double n_alpha, double w) {
    const double n_rem = t.big_n - w * n_alpha;
    if (n_rem < 0.0) return false;
    const double m_rem_sq = std::norm(Complex(t.big_m, 0.0) - w * m_alpha);
    if (w >= 1.0) {
        // No remainder channel left: the single channel must match exactly.
        return n_rem <= 1e-14 && m_rem_sq <= 1e-28;
    }
    return m_rem_sq <= n_rem * (n_rem + 1.0 - w);
}

}  // namespace

double max_channel_weight(const AggregateSqueezing& target, double channel_n,
                          double channel_phase) {
    if (channel_n < 0.0)
        throw std::invalid_argument("max_channel_weight: channel_n < 0");
    const Complex m_alpha =
        std::polar(std::sqrt(channel_n * (channel_n + 1.0)), channel_phase);

    if (!weight_feasible(target, m_alpha, channel_n, 0.0))
        throw InfeasibleError(
            "max_channel_weight: target violates |M|^2 <= N(N+1)");
    if (weight_feasible(target, m_alpha, channel_n, 1.0)) return 1.0;

    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (weight_feasible(target, m_alpha, channel_n, mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

LinewidthPair linewidth_expansion(double n, double m_ratio) {
    if (n <= 0.0) throw std::invalid_argument("linewidth_expansion: n <= 0");
    if (m_ratio < 0.0 || m_ratio > 1.0)
        throw std::invalid_argument("linewidth_expansion: m_ratio outside [0,1]");
    LinewidthPair p;
    p.exact = n - m_ratio * std::sqrt(n * (n + 1.0)) + 0.5;
    p.asymptotic = (n + 0.5) * (1.0 - m_ratio) + m_ratio / (8.0 * n);
    return p;
}

}  // namespace sqspec
