#include "varjac/measure.hpp"

#include <algorithm>
#include <cmath>

#include "varjac/numerics/geometry.hpp"
#include "varjac/numerics/newton.hpp"

namespace varjac::measure {

namespace {

const char* kModule = "measure";

numerics::QuadratureSpec fine_spec()
{
    numerics::QuadratureSpec s;
    s.tolerance = 1e-14;
    s.max_depth = 40;
    return s;
}

// Integral over u in [0, 1] of g, which is smooth inside each panel of the
// support except for a logarithmic (near-)singularity at u_star. Intervals
// are graded geometrically towards u_star.
template <class G>
double integrate_support(G&& g, const SupportCurve& c, double u_star, bool graded)
{
    std::vector<double> bp = c.breaks();
    constexpr double h_min = 1e-12;
    if (graded) {
        bp.push_back(u_star);
        for (double h = 0.25; h > h_min; h *= 0.5) {
            bp.push_back(u_star - h);
            bp.push_back(u_star + h);
        }
    }
    for (double& b : bp) b = std::clamp(b, 0.0, 1.0);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    const auto spec = fine_spec();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        const double a = bp[k], b = bp[k + 1];
        const bool inner = graded && (a == u_star || b == u_star) && (b - a) <= 2.01 * h_min;
        total += inner ? numerics::gauss_fixed(g, a, b, 24) : numerics::integrate_interval(g, a, b, spec);
    }
    return total;
}

double psi(Complex A, double B, Complex z)
{
    // principal arg of z - 1: single valued off (-inf, 1]
    const Complex zm1 = z - 1.0;
    return -0.5 * (A.real() * std::log(std::abs(zm1)) - A.imag() * std::arg(zm1) + B * std::log(std::abs(z + 1.0)));
}

}  // namespace

// ---------------------------------------------------------------------------

ArcMeasure::ArcMeasure(const QuadraticDifferential& qd, const TrajectoryArc& gamma) : qd_(qd), curve_(qd, gamma) {}

double ArcMeasure::density_at(Complex z) const
{
    return std::sqrt(std::abs(qd_.R(z))) / (2.0 * kPi * std::abs(z * z - 1.0));
}

double ArcMeasure::weight_density(double u) const
{
    return density_at(curve_.position(u)) * std::abs(curve_.derivative(u));
}

double ArcMeasure::total_mass() const
{
    return integrate_support([&](double u) { return weight_density(u); }, curve_, 0.0, false);
}

double ArcMeasure::potential(Complex x) const
{
    const auto near = curve_.nearest(x);
    auto g = [&](double u) {
        const Complex z = curve_.position(u);
        if (z == x) return 0.0;
        return -std::log(std::abs(z - x)) * density_at(z) * std::abs(curve_.derivative(u));
    };
    return integrate_support(g, curve_, near.u, near.distance < 0.5);
}

double density(const QuadraticDifferential& qd, const TrajectoryArc& gamma, Complex z)
{
    const SupportCurve c(qd, gamma);
    if (c.nearest(z).distance > 1e-7) throw Error(ErrorCode::NotOnSupport, kModule, "not on support");
    return std::sqrt(std::abs(qd.R(z))) / (2.0 * kPi * std::abs(z * z - 1.0));
}

DiscretizedMeasure discretize(const QuadraticDifferential& qd, const TrajectoryArc& gamma, int N)
{
    if (N < 16) throw Error(ErrorCode::InvalidArgument, kModule, "discretize needs N >= 16");
    auto src = std::make_shared<ArcMeasure>(qd, gamma);
    const int panels = std::max(1, N / 16);

    // Gauss-Legendre panels in the support parameter; its cubic contact at the
    // zeros already absorbs the square-root vanishing of the density.
    DiscretizedMeasure m;
    m.nodes.reserve(N);
    m.weights.reserve(N);
    for (int p = 0; p < panels; ++p) {
        const int order = (p == panels - 1) ? 16 + N % 16 : 16;
        const auto& rule = numerics::gauss_legendre(order);
        const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
        for (int i = 0; i < order; ++i) {
            const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
            m.nodes.push_back(src->curve().position(u));
            m.weights.push_back(0.5 * (b - a) * rule.weights[i] * src->weight_density(u));
        }
    }
    m.total_mass = 0.0;
    for (double w : m.weights) m.total_mass += w;
    m.source = std::move(src);
    return m;
}

Complex cauchy_numeric(const DiscretizedMeasure& m, Complex z)
{
    const double d = m.source ? m.source->curve().nearest(z).distance : numerics::distance_to_polyline(z, m.nodes);
    if (d <= 1e-3) throw Error(ErrorCode::NearSingular, kModule, "near-singular evaluation");
    Complex sum{};
    for (std::size_t k = 0; k < m.nodes.size(); ++k) sum += m.weights[k] / (m.nodes[k] - z);
    return sum;
}

Complex cauchy_closed(const quaddiff::BranchCut& cut, Complex z)
{
    if (std::abs(z - 1.0) < 1e-14 || std::abs(z + 1.0) < 1e-14) throw Error(ErrorCode::Pole, kModule, "pole");
    const auto& p = cut.qd().params();
    return 0.5 * (p.A / (z - 1.0) + p.B / (z + 1.0) + cut.value(z) / (1.0 - z * z));
}

Complex cauchy_closed(const QuadraticDifferential& qd, const TrajectoryArc& gamma, Complex z)
{
    return cauchy_closed(quaddiff::BranchCut(qd, gamma), z);
}

double potential(const DiscretizedMeasure& m, Complex z)
{
    if (m.source && m.source->curve().nearest(z).distance < 1e-6)
        throw Error(ErrorCode::NearSingular, kModule, "potential evaluated on the support");
    double v = 0.0;
    for (std::size_t k = 0; k < m.nodes.size(); ++k) v -= m.weights[k] * std::log(std::abs(m.nodes[k] - z));
    return v;
}

double external_field(const QuadraticDifferential& qd, Complex z)
{
    if (std::abs(z - 1.0) == 0.0 || std::abs(z + 1.0) == 0.0) throw Error(ErrorCode::Pole, kModule, "pole");
    return psi(qd.params().A, qd.params().B, z);
}

FieldValue field_value(const ArcMeasure& mu, Complex z)
{
    FieldValue f;
    f.potential = mu.potential(z);
    f.external = external_field(mu.qd(), z);
    f.total = f.potential + f.external;
    return f;
}

// ---------------------------------------------------------------------------

void validate_contour(const QuadraticDifferential& qd, std::span<const Complex> F)
{
    auto bad = [](const std::string& w) { throw Error(ErrorCode::InvalidContour, kModule, "invalid contour: " + w); };
    if (F.size() < 4) bad("too few points");
    if (std::abs(F.front() + 1.0) > 1e-12 || std::abs(F.back() + 1.0) > 1e-12) bad("must start and end at -1");
    if (!(F[1].imag() > 0.0)) bad("must leave -1 into the upper half-plane");
    if (!(F[F.size() - 2].imag() < 0.0)) bad("must return to -1 from the lower half-plane");
    bool hit_p = false, hit_m = false;
    for (Complex p : F) {
        hit_p |= std::abs(p - qd.zeta_plus()) < 1e-9;
        hit_m |= std::abs(p - qd.zeta_minus()) < 1e-9;
    }
    if (!hit_p || !hit_m) bad("must pass through both zeros");
    for (std::size_t k = 1; k + 1 < F.size(); ++k)
        if (F[k].imag() == 0.0 && F[k].real() <= 1.0) bad("touches (-inf, 1]");
    const Polyline inner(F.begin() + 1, F.end() - 1);
    for (double x : numerics::real_axis_crossings(inner))
        if (!(x > 1.0)) bad("crosses (-inf, 1]");
}

Polyline default_test_contour(const QuadraticDifferential& qd, const tracer::CriticalGraph& graph, double offset)
{
    const Complex zp = qd.zeta_plus(), zm = qd.zeta_minus();
    auto bowed = [&](Complex a, Complex b) {
        // quadratic Bezier bowed to the left of the direction a -> b
        const Complex mid = 0.5 * (a + b), dir = (b - a) / std::abs(b - a);
        const Complex ctrl = mid + 2.0 * offset * kI * dir;
        Polyline p;
        const int n = 200;
        for (int j = 0; j <= n; ++j) {
            const double t = static_cast<double>(j) / n;
            p.push_back((1 - t) * (1 - t) * a + 2 * t * (1 - t) * ctrl + t * t * b);
        }
        return p;
    };
    // F1: -1 -> zeta_+ (upper side), F2: zeta_- -> -1 (lower side)
    Polyline F1 = bowed(-1.0, zp);
    Polyline F2 = bowed(zm, -1.0);
    for (std::size_t k = 0; k + 1 < F1.size(); ++k)
        for (const TrajectoryArc* a : {&graph.gamma, &graph.sigma_plus})
            if (numerics::segment_crosses_polyline(F1[k], F1[k + 1], a->points) && k + 2 < F1.size())
                throw Error(ErrorCode::InvalidContour, kModule, "invalid contour: connector meets the critical graph");
    if (graph.sigma_inf)
        for (std::size_t k = 0; k + 2 < F1.size(); ++k)
            if (numerics::segment_crosses_polyline(F1[k], F1[k + 1], graph.sigma_inf->points))
                throw Error(ErrorCode::InvalidContour, kModule, "invalid contour: connector meets sigma_inf");
    for (std::size_t k = 1; k + 1 < F2.size(); ++k)
        for (const TrajectoryArc* a : {&graph.gamma, &graph.sigma_plus})
            if (numerics::segment_crosses_polyline(F2[k], F2[k + 1], a->points))
                throw Error(ErrorCode::InvalidContour, kModule, "invalid contour: connector meets the critical graph");

    Polyline F = F1;
    for (auto it = graph.gamma.points.rbegin() + 1; it != graph.gamma.points.rend(); ++it) F.push_back(*it);
    F.insert(F.end(), F2.begin() + 1, F2.end());
    validate_contour(qd, F);
    return F;
}

EquilibriumReport equilibrium_check(const QuadraticDifferential& qd, const TrajectoryArc& gamma,
                                    std::span<const Complex> F, const DiscretizedMeasure& m)
{
    validate_contour(qd, F);
    const std::shared_ptr<const ArcMeasure> mu = m.source ? m.source : std::make_shared<ArcMeasure>(qd, gamma);

    EquilibriumReport r;
    std::vector<double> vals;
    vals.reserve(m.nodes.size());
    for (Complex z : m.nodes) vals.push_back(field_value(*mu, z).total);
    double sum = 0.0;
    for (double v : vals) sum += v;
    r.c_hat = sum / vals.size();
    double var = 0.0;
    for (double v : vals) {
        r.max_dev_on_gamma = std::max(r.max_dev_on_gamma, std::abs(v - r.c_hat));
        var += (v - r.c_hat) * (v - r.c_hat);
    }
    r.stdev_on_gamma = std::sqrt(var / vals.size());

    // the parts of F off gamma: before zeta_+ and after zeta_-
    std::size_t ip = 0, im = 0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        if (std::abs(F[k] - qd.zeta_plus()) < 1e-9 && ip == 0) ip = k;
        if (std::abs(F[k] - qd.zeta_minus()) < 1e-9) im = k;
    }
    std::vector<std::pair<Complex, Complex>> pieces;
    for (std::size_t k = 0; k < ip; ++k) pieces.emplace_back(F[k], F[k + 1]);
    for (std::size_t k = im; k + 1 < F.size(); ++k) pieces.emplace_back(F[k], F[k + 1]);

    r.min_margin_on_F = 1e300;
    r.min_margin_away_from_zeros = 1e300;
    for (auto [a, b] : pieces) {
        const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.01)));
        for (int j = 0; j <= sub; ++j) {
            const Complex z = a + (b - a) * (static_cast<double>(j) / sub);
            if (std::abs(z + 1.0) < 1e-12 || qd.distance_to_zeros(z) < 1e-12) continue;
            const double margin = field_value(*mu, z).total - r.c_hat;
            if (margin < r.min_margin_on_F) {
                r.min_margin_on_F = margin;
                r.argmin_on_F = z;
            }
            if (qd.distance_to_zeros(z) > 0.05) r.min_margin_away_from_zeros = std::min(r.min_margin_away_from_zeros, margin);
        }
    }
    return r;
}

SProperty s_property_check(const QuadraticDifferential& qd, const DiscretizedMeasure& m, Complex z, double h)
{
    if (!(h >= 1e-6 && h <= 1e-3)) throw Error(ErrorCode::InvalidArgument, kModule, "h must lie in [1e-6, 1e-3]");
    if (!m.source) throw Error(ErrorCode::InvalidArgument, kModule, "measure has no continuous source");
    const ArcMeasure& mu = *m.source;
    const auto near = mu.curve().nearest(z);
    if (near.distance > 1e-7) throw Error(ErrorCode::NotOnSupport, kModule, "not on support");
    if (qd.distance_to_zeros(near.point) < 10.0 * h) throw Error(ErrorCode::EndpointRegion, kModule, "endpoint region");
    const Complex t = mu.curve().derivative(near.u);
    const Complex n = kI * t / std::abs(t);
    auto f = [&](Complex x) { return field_value(mu, x).total; };
    SProperty sp;
    sp.d_plus = numerics::one_sided_derivative(f, near.point, n, h);
    sp.d_minus = numerics::one_sided_derivative(f, near.point, -n, h);
    return sp;
}

}  // namespace varjac::measure
