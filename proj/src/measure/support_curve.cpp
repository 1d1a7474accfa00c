#include "varjac/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varjac/numerics/gauss_legendre.hpp"

namespace varjac::measure {

namespace {

constexpr int kInitialPanels = 16;
constexpr int kMaxDepth = 12;
constexpr int kNewtonIterations = 20;

double tau_of(double u) { return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u); }

}  // namespace

SupportCurve::SupportCurve(const QuadraticDifferential& qd, const TrajectoryArc& gamma)
    : qd_(qd), pts_(gamma.points), w_(gamma.w_values)
{
    if (pts_.size() < 2 || gamma.start != StartTag::ZetaMinus || gamma.end != EndTag::ZetaPlus)
        throw Error(ErrorCode::InvalidArgument, "measure", "support must be the short trajectory zeta_- -> zeta_+");
    phi_ = tracer::cumulative_primitive(qd, gamma);
    total_ = phi_.back();
    if (std::abs(total_.imag()) < 1e-12)
        throw Error(ErrorCode::InvalidArgument, "measure", "primitive does not advance along the support");

    level_.resize(phi_.size());
    double run = 0.0;
    for (std::size_t k = 0; k < phi_.size(); ++k) {
        run = std::max(run, phi_[k].imag() / total_.imag());
        level_[k] = run;
    }
    level_.back() = 1.0;

    for (int p = 0; p < kInitialPanels; ++p)
        build(static_cast<double>(p) / kInitialPanels, static_cast<double>(p + 1) / kInitialPanels, 0);
}

// Integral of w/(t^2-1) from zeta_- to z, with z close to segment k of the trace.
Complex SupportCurve::primitive_at(std::size_t k, Complex z) const
{
    const auto& rule = numerics::gauss_legendre(20);
    auto f = [&](Complex t, Complex zr, Complex wr) { return qd_.continue_from(zr, wr, t) / (t * t - 1.0); };

    const bool zero_left = (w_[k] == 0.0), zero_right = (w_[k + 1] == 0.0);
    if (zero_left || zero_right) {
        const std::size_t iz = zero_left ? k : k + 1, io = zero_left ? k + 1 : k;
        const Complex zeta = pts_[iz], d = z - zeta;
        Complex acc{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double v = 0.5 * (rule.nodes[i] + 1.0);
            acc += 0.5 * rule.weights[i] * f(zeta + d * (v * v), pts_[io], w_[io]) * (2.0 * v);
        }
        return phi_[iz] + d * acc;
    }
    const std::size_t j = std::abs(z - pts_[k]) <= std::abs(z - pts_[k + 1]) ? k : k + 1;
    const Complex d = z - pts_[j];
    Complex acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += 0.5 * rule.weights[i] * f(pts_[j] + d * (0.5 * (rule.nodes[i] + 1.0)), pts_[j], w_[j]);
    return phi_[j] + d * acc;
}

Complex SupportCurve::locate_point(double tau) const
{
    if (tau <= 0.0) return pts_.front();
    if (tau >= 1.0) return pts_.back();
    auto it = std::upper_bound(level_.begin(), level_.end(), tau);
    std::size_t k = static_cast<std::size_t>(std::distance(level_.begin(), it));
    k = std::clamp<std::size_t>(k, 1, pts_.size() - 1) - 1;
    const double span = level_[k + 1] - level_[k];
    const double frac = span > 0.0 ? std::clamp((tau - level_[k]) / span, 0.0, 1.0) : 0.5;

    // the primitive grows like distance^(3/2) next to a zero
    Complex z;
    if (w_[k] == 0.0)
        z = pts_[k] + (pts_[k + 1] - pts_[k]) * std::pow(frac, 2.0 / 3.0);
    else if (w_[k + 1] == 0.0)
        z = pts_[k + 1] + (pts_[k] - pts_[k + 1]) * std::pow(1.0 - frac, 2.0 / 3.0);
    else
        z = pts_[k] + (pts_[k + 1] - pts_[k]) * frac;

    // the real part of the knot primitives drifts at round-off level; follow it
    // linearly so neighbouring segments agree
    const Complex target(phi_[k].real() + frac * (phi_[k + 1].real() - phi_[k].real()), tau * total_.imag());
    const std::size_t ref = (w_[k] == 0.0) ? k + 1 : k;
    for (int it_n = 0; it_n < kNewtonIterations; ++it_n) {
        const Complex dphi = qd_.continue_from(pts_[ref], w_[ref], z) / (z * z - 1.0);
        if (std::abs(dphi) == 0.0) break;
        const Complex step = (primitive_at(k, z) - target) / dphi;
        z -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
    }
    return z;
}

SupportCurve::Panel SupportCurve::make_panel(double a, double b) const
{
    constexpr int n = kDegree;
    Panel P;
    P.a = a;
    P.b = b;
    for (int j = 0; j <= n; ++j) {
        const double x = std::cos(kPi * j / n);
        P.z[j] = locate_point(tau_of(0.5 * (a + b) + 0.5 * (b - a) * x));
    }
    for (int m = 0; m <= n; ++m) {
        Complex s{};
        for (int j = 0; j <= n; ++j) {
            const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
            s += wj * P.z[j] * std::cos(kPi * j * m / n);
        }
        P.c[m] = (2.0 / n) * s;
    }
    P.c[0] *= 0.5;
    P.c[n] *= 0.5;

    // derivative series in x, then scaled to d/du
    std::array<Complex, n + 2> d{};
    for (int m = n; m >= 1; --m) d[m - 1] = d[m + 1] + 2.0 * m * P.c[m];
    d[0] *= 0.5;
    for (int m = 0; m <= n; ++m) P.dc[m] = d[m] * (2.0 / (b - a));
    return P;
}

void SupportCurve::build(double a, double b, int depth)
{
    Panel P = make_panel(a, b);
    double scale = 0.0;
    for (const auto& c : P.c) scale = std::max(scale, std::abs(c));
    const double tail = std::max({std::abs(P.c[kDegree]), std::abs(P.c[kDegree - 1]), std::abs(P.c[kDegree - 2])});
    if (tail <= 1e-12 * std::max(1.0, scale) || depth >= kMaxDepth) {
        panels_.push_back(P);
        return;
    }
    const double mid = 0.5 * (a + b);
    build(a, mid, depth + 1);
    build(mid, b, depth + 1);
}

const SupportCurve::Panel& SupportCurve::panel_for(double u) const
{
    auto it = std::upper_bound(panels_.begin(), panels_.end(), u, [](double v, const Panel& p) { return v < p.b; });
    if (it == panels_.end()) return panels_.back();
    return *it;
}

namespace {

template <std::size_t N>
Complex clenshaw(const std::array<Complex, N>& c, double x)
{
    Complex b1{}, b2{};
    for (std::size_t k = N - 1; k >= 1; --k) {
        const Complex b0 = c[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + x * b1 - b2;
}

}  // namespace

Complex SupportCurve::position(double u) const
{
    const Panel& P = panel_for(u);
    const double x = std::clamp((2.0 * u - P.a - P.b) / (P.b - P.a), -1.0, 1.0);
    return clenshaw(P.c, x);
}

Complex SupportCurve::derivative(double u) const
{
    const Panel& P = panel_for(u);
    const double x = std::clamp((2.0 * u - P.a - P.b) / (P.b - P.a), -1.0, 1.0);
    return clenshaw(P.dc, x);
}

std::vector<double> SupportCurve::breaks() const
{
    std::vector<double> out;
    out.reserve(panels_.size() + 1);
    for (const auto& p : panels_) out.push_back(p.a);
    out.push_back(1.0);
    return out;
}

SupportCurve::Nearest SupportCurve::nearest(Complex z) const
{
    double best = std::numeric_limits<double>::infinity();
    double u = 0.0;
    for (const auto& P : panels_)
        for (int j = 0; j <= kDegree; ++j) {
            const double d = std::abs(P.z[j] - z);
            if (d < best) {
                best = d;
                u = 0.5 * (P.a + P.b) + 0.5 * (P.b - P.a) * std::cos(kPi * j / kDegree);
            }
        }
    // Gauss-Newton on |z(u) - z|^2, backtracking: dz/du vanishes at both ends,
    // where a full step can overshoot to the far end of the curve
    double dist = std::abs(position(u) - z);
    for (int it = 0; it < 50; ++it) {
        const Complex p = position(u), d1 = derivative(u);
        const double H = std::norm(d1);
        if (H == 0.0) break;
        double step = ((p - z) * std::conj(d1)).real() / H;
        bool moved = false;
        for (int k = 0; k < 40; ++k, step *= 0.5) {
            const double un = std::clamp(u - step, 0.0, 1.0);
            const double dn = std::abs(position(un) - z);
            if (dn <= dist) {
                moved = std::abs(un - u) >= 1e-16;
                u = un;
                dist = dn;
                break;
            }
        }
        if (!moved) break;
    }
    Nearest out;
    out.u = u;
    out.point = position(u);
    out.distance = std::abs(out.point - z);
    return out;
}

}  // namespace varjac::measure
