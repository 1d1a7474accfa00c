#include "varjac/arc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varjac/error.hpp"
#include "varjac/numerics/geometry.hpp"

namespace varjac {

const char* to_string(StartTag t)
{
    switch (t) {
        case StartTag::ZetaMinus: return "zeta_minus";
        case StartTag::ZetaPlus: return "zeta_plus";
        case StartTag::Regular: return "regular";
    }
    return "?";
}

const char* to_string(EndTag t)
{
    switch (t) {
        case EndTag::ZetaMinus: return "zeta_minus";
        case EndTag::ZetaPlus: return "zeta_plus";
        case EndTag::PoleMinus1: return "pole_minus1";
        case EndTag::PolePlus1: return "pole_plus1";
        case EndTag::Infinity: return "infinity";
        case EndTag::ClosedLoop: return "closed_loop";
        case EndTag::Interrupted: return "interrupted";
    }
    return "?";
}

ArcCurve::ArcCurve(Polyline points, std::vector<Complex> unit_tangents)
    : points_(std::move(points)), tangents_(std::move(unit_tangents))
{
    if (points_.size() < 2 || tangents_.size() != points_.size())
        throw Error(ErrorCode::InvalidArgument, "tracer", "arc curve needs >= 2 points with tangents");
    knots_.resize(points_.size());
    knots_[0] = 0.0;
    for (std::size_t k = 1; k < points_.size(); ++k) knots_[k] = knots_[k - 1] + std::abs(points_[k] - points_[k - 1]);
}

ArcCurve ArcCurve::from_trajectory(const TrajectoryArc& arc)
{
    const auto& p = arc.points;
    const std::size_t n = p.size();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "tracer", "arc too short");
    std::vector<Complex> tan(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex chord = (k + 1 < n) ? p[k + 1] - p[k] : p[k] - p[k - 1];
        const Complex w = arc.w_values[k];
        Complex t;
        if (std::abs(w) == 0.0) {
            t = chord;
        } else {
            const Complex v = w / (p[k] * p[k] - 1.0);
            t = arc.vertical ? std::conj(v) : kI * std::conj(v);
            if ((t * std::conj(chord)).real() < 0.0) t = -t;
        }
        tan[k] = t / std::abs(t);
    }
    return ArcCurve(p, std::move(tan));
}

std::size_t ArcCurve::locate(double s) const
{
    if (s <= 0.0) return 0;
    if (s >= knots_.back()) return points_.size() - 2;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    return static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
}

Complex ArcCurve::eval_piece(std::size_t k, double t) const
{
    const double h = knots_[k + 1] - knots_[k];
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * points_[k] + h10 * h * tangents_[k] + h01 * points_[k + 1] + h11 * h * tangents_[k + 1];
}

Complex ArcCurve::deriv_piece(std::size_t k, double t) const
{
    const double h = knots_[k + 1] - knots_[k];
    const double t2 = t * t;
    const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1, d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
    // d/dt divided by h gives d/ds
    return (d00 * points_[k] + d01 * points_[k + 1]) / h + d10 * tangents_[k] + d11 * tangents_[k + 1];
}

Complex ArcCurve::position(double s) const
{
    const std::size_t k = locate(s);
    const double h = knots_[k + 1] - knots_[k];
    return eval_piece(k, std::clamp((s - knots_[k]) / h, 0.0, 1.0));
}

Complex ArcCurve::derivative(double s) const
{
    const std::size_t k = locate(s);
    const double h = knots_[k + 1] - knots_[k];
    return deriv_piece(k, std::clamp((s - knots_[k]) / h, 0.0, 1.0));
}

ArcCurve::Nearest ArcCurve::nearest(Complex z) const
{
    std::size_t best_k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
        const double d = numerics::distance_to_segment(z, points_[k], points_[k + 1]);
        if (d < best) { best = d; best_k = k; }
    }
    Nearest out;
    out.distance = std::numeric_limits<double>::infinity();
    const std::size_t lo = best_k > 0 ? best_k - 1 : 0;
    const std::size_t hi = std::min(best_k + 1, points_.size() - 2);
    for (std::size_t k = lo; k <= hi; ++k) {
        const double h = knots_[k + 1] - knots_[k];
        double t = numerics::project_on_segment(z, points_[k], points_[k + 1]);
        // Newton on d/dt |z(t) - z|^2 with clamping
        for (int it = 0; it < 20; ++it) {
            const Complex p = eval_piece(k, t);
            const Complex d1 = deriv_piece(k, t) * h;
            const double g = ((p - z) * std::conj(d1)).real();
            const double H = std::norm(d1);
            if (H == 0.0) break;
            const double tn = std::clamp(t - g / H, 0.0, 1.0);
            if (std::abs(tn - t) < 1e-15) { t = tn; break; }
            t = tn;
        }
        const Complex p = eval_piece(k, t);
        const double d = std::abs(p - z);
        if (d < out.distance) {
            out.distance = d;
            out.point = p;
            out.s = knots_[k] + t * h;
        }
    }
    return out;
}

Polyline ArcCurve::dense(int per_segment) const
{
    Polyline out;
    out.reserve(segments() * per_segment + 1);
    for (std::size_t k = 0; k + 1 < points_.size(); ++k)
        for (int j = 0; j < per_segment; ++j) out.push_back(eval_piece(k, static_cast<double>(j) / per_segment));
    out.push_back(points_.back());
    return out;
}

}  // namespace varjac
