#include "sqspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sqspec {

DetuningGrid DetuningGrid::make_uniform(double min, double max, std::size_t points) {
    if (!(min < max) || points < 2)
        throw std::invalid_argument("DetuningGrid: need min < max and >= 2 points");
    DetuningGrid g;
    g.uniform = true;
    g.detunings.resize(points);
    const double step = (max - min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i)
        g.detunings[i] = min + step * static_cast<double>(i);
    g.detunings.back() = max;
    return g;
}

void DetuningGrid::validate() const {
    if (detunings.empty())
        throw std::invalid_argument("DetuningGrid: empty grid");
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        if (!std::isfinite(detunings[i]))
            throw std::invalid_argument("DetuningGrid: non-finite detuning");
        if (i > 0 && !(detunings[i] > detunings[i - 1]))
            throw std::invalid_argument("DetuningGrid: not strictly increasing");
    }
}

Complex ExponentialSum::operator()(double tau) const {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < coefficients.size(); ++k)
        acc += coefficients[k] * std::exp(-rates[k] * tau);
    return acc;
}

double ExponentialSum::slowest_decay() const {
    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& r : rates) slowest = std::min(slowest, r.real());
    return slowest;
}

Complex w_scattered(const AggregateSqueezing& agg, double gamma_alpha, double tau) {
    const double pref = 0.5 * gamma_alpha * agg.big_n / (2.0 * agg.big_n + 1.0);
    return {pref * (std::exp(-agg.gamma_plus * tau) + std::exp(-agg.gamma_minus * tau)),
            0.0};
}

Complex w_interference(const AggregateSqueezing& agg, const ChannelSqueezing& channel,
                       double tau) {
    const double pref = -0.5 * channel.gamma_alpha / (2.0 * agg.big_n + 1.0);
    const Complex na{channel.n_alpha, 0.0};
    return pref * (std::exp(-agg.gamma_plus * tau) * (na + channel.m_alpha) +
                   std::exp(-agg.gamma_minus * tau) * (na - channel.m_alpha));
}

SpectrumDecomposition channel_spectrum(const AggregateSqueezing& agg,
                                       const ChannelSqueezing& channel,
                                       const DetuningGrid& grid,
                                       bool include_background) {
    grid.validate();
    const std::size_t n = grid.detunings.size();

    SpectrumDecomposition out;
    out.grid = grid;
    out.background.assign(n, include_background ? channel.n_alpha : 0.0);
    out.scattered.resize(n);
    out.interference.resize(n);
    out.total.resize(n);

    const double gp = agg.gamma_plus;
    const double gm = agg.gamma_minus;
    const double two_n1 = 2.0 * agg.big_n + 1.0;
    const double re_m = channel.m_alpha.real();
    const double im_m = channel.m_alpha.imag();
    const double odd_pref =
        2.0 * agg.big_m * channel.gamma_alpha * agg.gamma * agg.gamma * im_m;

    for (std::size_t i = 0; i < n; ++i) {
        const double d = grid.detunings[i];
        const double lp = gp / (d * d + gp * gp);
        const double lm = gm / (d * d + gm * gm);

        out.scattered[i] = channel.gamma_alpha * agg.big_n / two_n1 * (lp + lm);
        out.interference[i] =
            channel.gamma_alpha / two_n1 *
                (lp * (-channel.n_alpha - re_m) + lm * (-channel.n_alpha + re_m)) +
            odd_pref * d / ((d * d + gp * gp) * (d * d + gm * gm));
        out.total[i] = out.background[i] + out.scattered[i] + out.interference[i];
    }
    return out;
}

std::vector<double> total_spectrum(const AggregateSqueezing& agg,
                                   const DetuningGrid& grid) {
    grid.validate();
    const double gp = agg.gamma_plus;
    const double gm = agg.gamma_minus;
    const double pref = agg.big_m * agg.gamma / (2.0 * agg.big_n + 1.0);

    std::vector<double> s(grid.detunings.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = grid.detunings[i];
        s[i] = agg.big_n +
               pref * (gm / (d * d + gm * gm) - gp / (d * d + gp * gp));
    }
    return s;
}

std::vector<double> spectrum_from_correlation(const ExponentialSum& w,
                                              const DetuningGrid& grid) {
    grid.validate();
    if (w.slowest_decay() <= 0.0)
        throw std::invalid_argument("spectrum_from_correlation: non-decaying input");

    std::vector<double> s(grid.detunings.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex id{0.0, grid.detunings[i]};
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < w.coefficients.size(); ++k)
            acc += w.coefficients[k] / (w.rates[k] + id);
        s[i] = 2.0 * acc.real();
    }
    return s;
}

namespace {

// Adaptive Simpson on a complex integrand.
Complex adaptiveSimpson(const std::function<Complex(double)>& f, double a, double b,
                        const Complex& fa, const Complex& fm, const Complex& fb,
                        const Complex& whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptiveSimpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptiveSimpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

Complex integratePanel(const std::function<Complex(double)>& f, double a, double b,
                       double tol) {
    const Complex fa = f(a);
    const Complex fm = f(0.5 * (a + b));
    const Complex fb = f(b);
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptiveSimpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

std::vector<double> spectrum_from_correlation(
    const std::function<Complex(double)>& w, double slowest_decay,
    const DetuningGrid& grid, double abs_tol) {
    grid.validate();
    if (slowest_decay <= 0.0)
        throw std::invalid_argument("spectrum_from_correlation: non-decaying input");

    const double tau_max = -std::log(1e-12) / slowest_decay;

    std::vector<double> s(grid.detunings.size(), 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = grid.detunings[i];
        const auto integrand = [&](double tau) {
            return std::exp(Complex(0.0, -d * tau)) * w(tau);
        };
        // Seed panels fine enough to resolve the oscillation and the fast decay.
        const int panels = std::max(
            16, static_cast<int>(std::ceil(tau_max * (std::abs(d) + slowest_decay) / 4.0)));
        Complex acc{0.0, 0.0};
        double a = 0.0;
        const double h = tau_max / panels;
        for (int p = 0; p < panels; ++p) {
            const double b = (p + 1 == panels) ? tau_max : a + h;
            acc += integratePanel(integrand, a, b, abs_tol / panels);
            a = b;
        }
        s[i] = 2.0 * acc.real();
    }
    return s;
}

std::vector<double> spectrum_from_correlation(const CorrelationFunction& w,
                                              const DetuningGrid& grid) {
    if (!w.modes)
        throw std::invalid_argument(
            "spectrum_from_correlation: sampled correlation carries no "
            "exponential-mode representation");
    return spectrum_from_correlation(*w.modes, grid);
}

}  // namespace sqspec
