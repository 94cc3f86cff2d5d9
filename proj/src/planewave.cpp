#include "sqspec/planewave.hpp"

#include <cmath>

namespace sqspec::planewave {

double einstein_a_coefficient(double omega0, double dipole_moment,
                              const RadiationConstants& k) {
    if (omega0 <= 0.0)
        throw std::invalid_argument("einstein_a_coefficient: omega0 <= 0");
    return std::pow(omega0, 3) * dipole_moment * dipole_moment /
           (3.0 * M_PI * k.eps0 * k.hbar * std::pow(k.c, 3));
}

PolarizationPair polarization_basis(const Eigen::Vector3d& k_hat) {
    const double norm = k_hat.norm();
    if (norm < 1e-300)
        throw std::invalid_argument("polarization_basis: zero direction");
    const Eigen::Vector3d k = k_hat / norm;

    Eigen::Vector3d e1 = Eigen::Vector3d::UnitZ().cross(k);
    if (e1.norm() < 1e-8) e1 = Eigen::Vector3d::UnitX().cross(k);
    e1.normalize();
    const Eigen::Vector3d e2 = k.cross(e1);
    return {e1, e2};
}

SqueezingSample DirectionalSqueezing::sample(const Eigen::Vector3d& k_hat,
                                             int lambda) const {
    switch (kind) {
        case Kind::uniform:
            return {n0, std::polar(std::sqrt(n0 * (n0 + 1.0)), arg_m0)};
        case Kind::cone: {
            const double theta =
                std::acos(std::clamp(cone_axis.normalized().dot(k_hat.normalized()),
                                     -1.0, 1.0));
            double u;
            if (edge_smoothing <= 0.0) {
                u = (theta <= cone_half_angle) ? 1.0 : 0.0;
            } else {
                const double x = std::clamp(
                    (cone_half_angle + edge_smoothing - theta) / (2.0 * edge_smoothing),
                    0.0, 1.0);
                u = x * x * (3.0 - 2.0 * x);  // smoothstep across the edge
            }
            const double n = n0 * u;
            return {n, std::polar(std::sqrt(n * (n + 1.0)), arg_m0)};
        }
        case Kind::custom:
            return custom(k_hat, lambda);
    }
    throw std::logic_error("DirectionalSqueezing::sample: bad kind");
}

DirectionalSqueezing DirectionalSqueezing::uniform(double n0, double arg_m0) {
    DirectionalSqueezing sq;
    sq.kind = Kind::uniform;
    sq.n0 = n0;
    sq.arg_m0 = arg_m0;
    return sq;
}

DirectionalSqueezing DirectionalSqueezing::cone(const Eigen::Vector3d& axis,
                                                double half_angle, double n0,
                                                double arg_m0, double smoothing) {
    DirectionalSqueezing sq;
    sq.kind = Kind::cone;
    sq.cone_axis = axis.normalized();
    sq.cone_half_angle = half_angle;
    sq.n0 = n0;
    sq.arg_m0 = arg_m0;
    sq.edge_smoothing = smoothing;
    return sq;
}

DirectionalSqueezing DirectionalSqueezing::custom_profile(
    std::function<SqueezingSample(const Eigen::Vector3d&, int)> f) {
    DirectionalSqueezing sq;
    sq.kind = Kind::custom;
    sq.custom = std::move(f);
    return sq;
}

Eigen::Vector3d DetectorGeometry::r_hat() const {
    const double r = r0.norm();
    if (r <= 0.0)
        throw std::invalid_argument("DetectorGeometry: detector at the origin");
    return r0 / r;
}

namespace {

struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussLegendre gauss_legendre(int n) {
    GaussLegendre q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(M_PI * (i - 0.25) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        q.nodes[i - 1] = -z;
        q.nodes[n - i] = z;
        q.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        q.weights[n - i] = q.weights[i - 1];
    }
    return q;
}

struct SphereNode {
    Eigen::Vector3d k_hat;
    double weight;  // d2k weight
};

// Rotation taking z to the given axis.
Eigen::Matrix3d frame_for_axis(const Eigen::Vector3d& axis) {
    const Eigen::Vector3d z = axis.normalized();
    Eigen::Vector3d x = Eigen::Vector3d::UnitX();
    if (std::abs(z.dot(x)) > 0.9) x = Eigen::Vector3d::UnitY();
    x = (x - z.dot(x) * z).normalized();
    const Eigen::Vector3d y = z.cross(x);
    Eigen::Matrix3d f;
    f.col(0) = x;
    f.col(1) = y;
    f.col(2) = z;
    return f;
}

// Product quadrature on the unit sphere; cos(theta) panels split at the
// given breakpoints (profile discontinuities), 2*order uniform phi nodes.
std::vector<SphereNode> sphere_nodes(int order, const Eigen::Vector3d& polar_axis,
                                     const std::vector<double>& cos_breaks) {
    order = std::max(order, 2);
    const GaussLegendre gl = gauss_legendre(order);
    const Eigen::Matrix3d frame = frame_for_axis(polar_axis);

    std::vector<double> edges{-1.0};
    for (double b : cos_breaks)
        if (b > -1.0 + 1e-14 && b < 1.0 - 1e-14) edges.push_back(b);
    edges.push_back(1.0);
    std::sort(edges.begin(), edges.end());

    const int n_phi = 2 * order;
    const double w_phi = 2.0 * M_PI / n_phi;

    std::vector<SphereNode> nodes;
    nodes.reserve((edges.size() - 1) * order * n_phi);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        const double mid = 0.5 * (edges[p + 1] + edges[p]);
        if (half <= 0.0) continue;
        for (int i = 0; i < order; ++i) {
            const double ct = mid + half * gl.nodes[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double w_ct = half * gl.weights[i];
            for (int j = 0; j < n_phi; ++j) {
                const double phi = w_phi * (j + 0.5);
                const Eigen::Vector3d local{st * std::cos(phi), st * std::sin(phi), ct};
                nodes.push_back({frame * local, w_ct * w_phi});
            }
        }
    }
    return nodes;
}

std::vector<double> profile_breaks(const DirectionalSqueezing& sq) {
    if (sq.kind != DirectionalSqueezing::Kind::cone) return {};
    if (sq.edge_smoothing <= 0.0) return {std::cos(sq.cone_half_angle)};
    return {std::cos(std::max(0.0, sq.cone_half_angle - sq.edge_smoothing)),
            std::cos(std::min(M_PI, sq.cone_half_angle + sq.edge_smoothing))};
}

Eigen::Vector3d quadrature_axis(const DirectionalSqueezing& sq) {
    return sq.kind == DirectionalSqueezing::Kind::cone ? sq.cone_axis
                                                       : Eigen::Vector3d::UnitZ();
}

bool in_analyzer(const std::optional<AnalyzerCone>& analyzer,
                 const Eigen::Vector3d& k_hat) {
    if (!analyzer) return true;
    const double c = analyzer->axis.normalized().dot(k_hat);
    return c >= std::cos(analyzer->half_angle);
}

// A . int d2k sum_{l in lambdas} N_{k,l} k_hat, the flat background flux.
double background_flux(const DirectionalSqueezing& sq, const DetectorGeometry& det,
                       const std::vector<int>& lambdas, int order,
                       const std::optional<AnalyzerCone>& analyzer) {
    const auto nodes = sphere_nodes(order, quadrature_axis(sq), profile_breaks(sq));
    Eigen::Vector3d flux = Eigen::Vector3d::Zero();
    for (const auto& node : nodes) {
        if (!in_analyzer(analyzer, node.k_hat)) continue;
        double n_sum = 0.0;
        for (int l : lambdas) n_sum += sq.sample(node.k_hat, l).n;
        flux += node.weight * n_sum * node.k_hat;
    }
    return det.area_vector.dot(flux);
}

SpectrumDecomposition assemble_direction_spectrum(
    const AtomDipole& dipole, const DirectionalSqueezing& sq,
    const DetectorGeometry& det, const AggregateSqueezing& agg,
    const DetuningGrid& grid, const std::vector<int>& lambdas, int order,
    const std::optional<AnalyzerCone>& analyzer) {
    grid.validate();
    const Eigen::Vector3d r_hat = det.r_hat();
    const double geom = geometric_prefactor(det);
    const double gp = agg.gamma_plus;
    const double gm = agg.gamma_minus;
    const double g = agg.gamma;
    const double two_n1 = 2.0 * agg.big_n + 1.0;

    const PolarizationPair basis = polarization_basis(r_hat);
    const Complex rotation = std::polar(1.0, -agg.phase_rotation);

    // Scattered weight: the dipole pattern restricted to the requested
    // polarizations; the full lambda sum gives 1 - |d.r|^2.
    double scattered_pattern = 0.0;
    struct LambdaTerm {
        double pattern;
        double n;
        Complex m;
    };
    std::vector<LambdaTerm> terms;
    for (int l : lambdas) {
        const Eigen::Vector3d& eps = (l == 1) ? basis.eps1 : basis.eps2;
        const double pattern = std::pow(eps.dot(dipole.d_hat), 2);
        scattered_pattern += pattern;
        const SqueezingSample s = sq.sample(r_hat, l);
        terms.push_back({pattern, s.n, s.m * rotation});
    }

    const double bg = background_flux(sq, det, lambdas, order, analyzer) /
                      (dipole.lambda0 * dipole.lambda0);

    const std::size_t npts = grid.detunings.size();
    SpectrumDecomposition out;
    out.grid = grid;
    out.background.assign(npts, bg);
    out.scattered.resize(npts);
    out.interference.resize(npts);
    out.total.resize(npts);

    for (std::size_t i = 0; i < npts; ++i) {
        const double d = grid.detunings[i];
        const double lp = gp / (d * d + gp * gp);
        const double lm = gm / (d * d + gm * gm);

        out.scattered[i] = geom * agg.big_n * g / two_n1 * scattered_pattern * (lp + lm);

        double interf = 0.0;
        for (const auto& t : terms) {
            interf += t.pattern *
                      (g / two_n1 *
                           (lp * (-t.n - t.m.real()) + lm * (-t.n + t.m.real())) +
                       2.0 * agg.big_m * g * g * g * d /
                           ((d * d + gp * gp) * (d * d + gm * gm)) * t.m.imag());
        }
        out.interference[i] = geom * interf;
        out.total[i] = out.background[i] + out.scattered[i] + out.interference[i];
    }
    return out;
}

}  // namespace

AggregateSqueezing aggregate_from_sphere(const AtomDipole& dipole,
                                         const DirectionalSqueezing& sq, int order) {
    if (order < 2)
        throw std::invalid_argument("aggregate_from_sphere: order < 2");

    const auto nodes = sphere_nodes(order, quadrature_axis(sq), profile_breaks(sq));
    Complex m_sum{0.0, 0.0};
    double n_sum = 0.0;
    for (const auto& node : nodes) {
        const PolarizationPair basis = polarization_basis(node.k_hat);
        for (int l : {1, 2}) {
            const Eigen::Vector3d& eps = (l == 1) ? basis.eps1 : basis.eps2;
            const double pattern = std::pow(eps.dot(dipole.d_hat), 2);
            const SqueezingSample s = sq.sample(node.k_hat, l);
            m_sum += node.weight * pattern * s.m;
            n_sum += node.weight * pattern * s.n;
        }
    }
    m_sum *= 3.0 / (8.0 * M_PI);
    n_sum *= 3.0 / (8.0 * M_PI);

    AggregateSqueezing agg;
    agg.gamma = dipole.gamma_total;
    agg.big_m = std::abs(m_sum);
    agg.big_n = n_sum;
    agg.phase_rotation = (agg.big_m > 0.0) ? std::arg(m_sum) : 0.0;
    agg.gamma_plus = (agg.big_n + agg.big_m + 0.5) * agg.gamma;
    agg.gamma_minus = (agg.big_n - agg.big_m + 0.5) * agg.gamma;
    return agg;
}

double geometric_prefactor(const DetectorGeometry& det) {
    const double r2 = det.r0.squaredNorm();
    if (r2 <= 0.0)
        throw std::invalid_argument("geometric_prefactor: detector at the origin");
    return 3.0 * det.area_vector.dot(det.r_hat()) / (8.0 * M_PI * r2);
}

SpectrumDecomposition direction_spectrum(
    const AtomDipole& dipole, const DirectionalSqueezing& sq,
    const DetectorGeometry& det, const AggregateSqueezing& agg,
    const DetuningGrid& grid, int quadrature_order,
    const std::optional<AnalyzerCone>& analyzer) {
    return assemble_direction_spectrum(dipole, sq, det, agg, grid, {1, 2},
                                       quadrature_order, analyzer);
}

SpectrumDecomposition fixed_polarization_spectrum(
    const AtomDipole& dipole, const DirectionalSqueezing& sq,
    const DetectorGeometry& det, const AggregateSqueezing& agg,
    const DetuningGrid& grid, int lambda, int quadrature_order,
    const std::optional<AnalyzerCone>& analyzer) {
    if (lambda != 1 && lambda != 2)
        throw std::invalid_argument("fixed_polarization_spectrum: lambda not in {1,2}");
    return assemble_direction_spectrum(dipole, sq, det, agg, grid, {lambda},
                                       quadrature_order, analyzer);
}

}  // namespace sqspec::planewave
