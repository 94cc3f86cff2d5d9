#include "sqspec/bloch.hpp"

#include <algorithm>
#include <cmath>

namespace sqspec::bloch {

namespace {

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

// vec(A X B) = (B^T kron A) vec(X), column-major vec.
Eigen::Matrix4cd sandwich(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    return kron2(b.transpose(), a);
}

Eigen::Matrix4cd dissipator(const Eigen::Matrix2cd& c) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd cc = c.adjoint() * c;
    return sandwich(c, c.adjoint()) - 0.5 * sandwich(cc, id) - 0.5 * sandwich(id, cc);
}

Eigen::Vector4cd vec2(const Eigen::Matrix2cd& m) {
    Eigen::Vector4cd v;
    v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
    return v;
}

Eigen::Matrix2cd unvec2(const Eigen::Vector4cd& v) {
    Eigen::Matrix2cd m;
    m << v(0), v(2), v(1), v(3);
    return m;
}

}  // namespace

Eigen::Matrix2cd sigma_plus() {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    s(0, 1) = 1.0;  // |e><g|
    return s;
}

Eigen::Matrix2cd sigma_minus() {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    s(1, 0) = 1.0;  // |g><e|
    return s;
}

Eigen::Matrix2cd atomic_op(AtomicOp tag) {
    switch (tag) {
        case AtomicOp::sigma_plus: return sigma_plus();
        case AtomicOp::sigma_minus: return sigma_minus();
    }
    throw std::invalid_argument("atomic_op: unknown tag");
}

MasterEquationGenerator::MasterEquationGenerator(const AggregateSqueezing& agg)
    : agg_(agg) {
    const double g = agg.gamma;
    const double n = agg.big_n;
    const Complex m{agg.big_m, 0.0};  // aggregate convention: M real >= 0
    const Eigen::Matrix2cd sp = sigma_plus();
    const Eigen::Matrix2cd sm = sigma_minus();

    liou_ = g * (n + 1.0) * dissipator(sm) + g * n * dissipator(sp) -
            g * m * sandwich(sp, sp) - g * std::conj(m) * sandwich(sm, sm);

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(liou_);
    vecs_ = es.eigenvectors();
    vals_ = es.eigenvalues();
    vecs_inv_ = vecs_.inverse();
}

Eigen::Matrix4cd MasterEquationGenerator::propagator(double tau) const {
    Eigen::Vector4cd e;
    for (int k = 0; k < 4; ++k) e(k) = std::exp(vals_(k) * tau);
    return vecs_ * e.asDiagonal() * vecs_inv_;
}

std::array<double, 2> MasterEquationGenerator::coherence_decay_rates() const {
    // The coherence components vec indices are 1 (rho_ge) and 2 (rho_eg);
    // they close under the flow.
    Eigen::Matrix2cd block;
    block << liou_(1, 1), liou_(1, 2), liou_(2, 1), liou_(2, 2);
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(block);
    double r0 = -es.eigenvalues()(0).real();
    double r1 = -es.eigenvalues()(1).real();
    if (r0 > r1) std::swap(r0, r1);
    return {r0, r1};
}

Eigen::Vector4cd MasterEquationGenerator::evolve(const Eigen::Vector4cd& x0,
                                                 double t0, double t1) const {
    // Dormand-Prince 5(4), adaptive; the flow is autonomous so the stage
    // times are not needed.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double rtol = 1e-10, atol = 1e-12;

    if (t1 <= t0) return x0;
    const auto f = [this](const Eigen::Vector4cd& x) -> Eigen::Vector4cd {
        return liou_ * x;
    };

    Eigen::Vector4cd y = x0;
    double t = t0;
    double h = std::min(t1 - t0, 0.1 / std::max(1.0, liou_.cwiseAbs().maxCoeff()));
    Eigen::Vector4cd k1 = f(y);

    while (t < t1) {
        h = std::min(h, t1 - t);
        const Eigen::Vector4cd k2 = f(y + h * (a21 * k1));
        const Eigen::Vector4cd k3 = f(y + h * (a31 * k1 + a32 * k2));
        const Eigen::Vector4cd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Eigen::Vector4cd k5 =
            f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Eigen::Vector4cd k6 =
            f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Eigen::Vector4cd ynew =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Eigen::Vector4cd k7 = f(ynew);
        const Eigen::Vector4cd err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double norm = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double scale =
                atol + rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            norm = std::max(norm, std::abs(err(i)) / scale);
        }

        if (norm <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
        }
        const double factor =
            (norm > 0.0) ? 0.9 * std::pow(norm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return y;
}

ExponentialSum MasterEquationGenerator::trace_modes(const Eigen::Matrix2cd& readout,
                                                    const Eigen::Matrix2cd& x0) const {
    // Tr[A X] = vec(A^T)^T vec(X).
    const Eigen::Vector4cd row = vec2(readout.transpose());
    const Eigen::Vector4cd proj = (row.transpose() * vecs_).transpose();
    const Eigen::Vector4cd amps = vecs_inv_ * vec2(x0);

    std::array<Complex, 4> coeff;
    double cmax = 0.0;
    for (int k = 0; k < 4; ++k) {
        coeff[k] = proj(k) * amps(k);
        cmax = std::max(cmax, std::abs(coeff[k]));
    }
    // Drop numerically-zero modes; in particular the rate-0 trace mode,
    // which only enters through roundoff for the traceless insertions used
    // here, must not poison the decay estimate of the sum.
    const double threshold = 1e-12 * (1.0 + cmax);
    ExponentialSum modes;
    for (int k = 0; k < 4; ++k) {
        if (std::abs(coeff[k]) < threshold) continue;
        modes.coefficients.push_back(coeff[k]);
        modes.rates.push_back(-vals_(k));
    }
    if (modes.coefficients.empty()) {
        modes.coefficients.push_back({0.0, 0.0});
        modes.rates.push_back({1.0, 0.0});
    }
    return modes;
}

Eigen::Matrix2cd stationary_density(const MasterEquationGenerator& gen) {
    if (gen.aggregate().gamma_minus <= 0.0)
        throw std::domain_error("stationary_density: gamma_- <= 0, generator degenerate");

    // L vec(rho) = 0 with Tr rho = 1, solved as a stacked least-squares system.
    Eigen::Matrix<Complex, 5, 4> a;
    a.topRows<4>() = gen.liouvillian();
    a.row(4) << 1.0, 0.0, 0.0, 1.0;  // trace row
    Eigen::Matrix<Complex, 5, 1> rhs = Eigen::Matrix<Complex, 5, 1>::Zero();
    rhs(4) = 1.0;
    const Eigen::Vector4cd sol =
        a.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rhs);
    return unvec2(sol);
}

BlochState stationary_state(const MasterEquationGenerator& gen) {
    const Eigen::Matrix2cd rho = stationary_density(gen);
    BlochState s;
    s.v(0) = (sigma_minus() * rho).trace();
    s.v(1) = (sigma_plus() * rho).trace();
    s.v(2) = (sigma_plus() * sigma_minus() * rho).trace();
    return s;
}

namespace {

CorrelationFunction traced_evolution(const MasterEquationGenerator& gen,
                                     const Eigen::Matrix2cd& readout,
                                     const Eigen::Matrix2cd& x0,
                                     const std::vector<double>& tau_grid,
                                     CorrelationKind kind) {
    CorrelationFunction w;
    w.kind = kind;
    w.tau_grid = tau_grid;
    w.values.resize(tau_grid.size());
    w.modes = gen.trace_modes(readout, x0);

    // March through the sorted grid, reusing the state between points.
    std::vector<std::size_t> order(tau_grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return tau_grid[a] < tau_grid[b]; });

    Eigen::Vector4cd x;
    x << x0(0, 0), x0(1, 0), x0(0, 1), x0(1, 1);
    const Eigen::Vector4cd row{readout(0, 0), readout(0, 1), readout(1, 0),
                               readout(1, 1)};  // vec(A^T)
    double t = 0.0;
    for (const std::size_t idx : order) {
        const double tau = tau_grid[idx];
        if (tau < 0.0)
            throw std::invalid_argument("regression correlator: tau < 0");
        x = gen.evolve(x, t, tau);
        t = std::max(t, tau);
        w.values[idx] = (row.transpose() * x)(0, 0);
    }
    return w;
}

}  // namespace

CorrelationFunction regression_correlator(const MasterEquationGenerator& gen,
                                          AtomicOp late, AtomicOp early,
                                          const std::vector<double>& tau_grid,
                                          Ordering ordering) {
    const Eigen::Matrix2cd a = atomic_op(late);
    const Eigen::Matrix2cd b = atomic_op(early);
    const Eigen::Matrix2cd rho = stationary_density(gen);
    const Eigen::Matrix2cd x0 =
        (ordering == Ordering::late_early) ? Eigen::Matrix2cd(b * rho)
                                           : Eigen::Matrix2cd(rho * b);
    return traced_evolution(gen, a, x0, tau_grid, CorrelationKind::combined);
}

CorrelationFunction oracle_scattered(const MasterEquationGenerator& gen,
                                     double gamma_alpha,
                                     const std::vector<double>& tau_grid) {
    const Eigen::Matrix2cd rho = stationary_density(gen);
    const Eigen::Matrix2cd x0 = sigma_minus() * rho;
    CorrelationFunction w =
        traced_evolution(gen, sigma_plus(), x0, tau_grid, CorrelationKind::scattered);
    for (auto& v : w.values) v *= gamma_alpha;
    for (auto& c : w.modes->coefficients) c *= gamma_alpha;
    return w;
}

CorrelationFunction oracle_interference(const MasterEquationGenerator& gen,
                                        const ChannelSqueezing& channel,
                                        const std::vector<double>& tau_grid) {
    const Eigen::Matrix2cd rho = stationary_density(gen);
    const Eigen::Matrix2cd sp = sigma_plus();
    const Eigen::Matrix2cd sm = sigma_minus();

    // Commutator insertions: <[s+_{t+tau}, B_t]> = Tr[s+ e^{L tau}([B, rho])].
    const Eigen::Matrix2cd comm_minus = sm * rho - rho * sm;
    const Eigen::Matrix2cd comm_plus = sp * rho - rho * sp;

    const CorrelationFunction cpm =
        traced_evolution(gen, sp, comm_minus, tau_grid, CorrelationKind::combined);
    const CorrelationFunction cpp =
        traced_evolution(gen, sp, comm_plus, tau_grid, CorrelationKind::combined);

    CorrelationFunction w;
    w.kind = CorrelationKind::interference;
    w.tau_grid = tau_grid;
    w.values.resize(tau_grid.size());
    const double ga = channel.gamma_alpha;
    const Complex na{channel.n_alpha, 0.0};
    const Complex ma = channel.m_alpha;
    for (std::size_t i = 0; i < tau_grid.size(); ++i)
        w.values[i] = ga * (na * cpm.values[i] - ma * cpp.values[i]);

    ExponentialSum modes;
    for (std::size_t k = 0; k < cpm.modes->coefficients.size(); ++k) {
        modes.coefficients.push_back(ga * na * cpm.modes->coefficients[k]);
        modes.rates.push_back(cpm.modes->rates[k]);
    }
    for (std::size_t k = 0; k < cpp.modes->coefficients.size(); ++k) {
        modes.coefficients.push_back(-ga * ma * cpp.modes->coefficients[k]);
        modes.rates.push_back(cpp.modes->rates[k]);
    }
    w.modes = std::move(modes);
    return w;
}

SpectrumDecomposition oracle_spectrum(const MasterEquationGenerator& gen,
                                      const ChannelSqueezing& channel,
                                      const DetuningGrid& grid,
                                      bool include_background) {
    grid.validate();
    const std::vector<double> tau0{0.0};
    const CorrelationFunction ws = oracle_scattered(gen, channel.gamma_alpha, tau0);
    const CorrelationFunction wi = oracle_interference(gen, channel, tau0);

    SpectrumDecomposition out;
    out.grid = grid;
    out.scattered = spectrum_from_correlation(ws, grid);
    out.interference = spectrum_from_correlation(wi, grid);
    out.background.assign(grid.detunings.size(),
                          include_background ? channel.n_alpha : 0.0);
    out.total.resize(grid.detunings.size());
    for (std::size_t i = 0; i < out.total.size(); ++i)
        out.total[i] = out.background[i] + out.scattered[i] + out.interference[i];
    return out;
}

std::vector<double> default_tau_grid(double gamma) {
    std::vector<double> grid;
    grid.push_back(0.0);
    const double lo = 1e-3 / gamma, hi = 15.0 / gamma;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        grid.push_back(lo * std::pow(hi / lo, f));
    }
    return grid;
}

}  // namespace sqspec::bloch
