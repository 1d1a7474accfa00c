#include "varjac/numerics/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varjac/error.hpp"

namespace varjac::numerics {

namespace {
double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }
}  // namespace

double project_on_segment(Complex p, Complex a, Complex b)
{
    const Complex d = b - a;
    const double dd = std::norm(d);
    if (dd == 0.0) return 0.0;
    const double s = ((p - a) * std::conj(d)).real() / dd;
    return std::clamp(s, 0.0, 1.0);
}

double distance_to_segment(Complex p, Complex a, Complex b)
{
    const double s = project_on_segment(p, a, b);
    return std::abs(p - (a + s * (b - a)));
}

double distance_to_polyline(Complex p, std::span<const Complex> poly)
{
    if (poly.empty()) return std::numeric_limits<double>::infinity();
    if (poly.size() == 1) return std::abs(p - poly[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) best = std::min(best, distance_to_segment(p, poly[k], poly[k + 1]));
    return best;
}

std::optional<std::pair<double, double>> segment_intersection(Complex a, Complex b, Complex c, Complex d)
{
    const Complex r = b - a, s = d - c;
    const double den = cross(r, s);
    if (den == 0.0) return std::nullopt;  // parallel; collinear overlap is not reported
    const double t = cross(c - a, s) / den;
    const double u = cross(c - a, r) / den;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return std::make_pair(t, u);
}

bool segment_crosses_polyline(Complex a, Complex b, std::span<const Complex> poly)
{
    const double xmin = std::min(a.real(), b.real()), xmax = std::max(a.real(), b.real());
    const double ymin = std::min(a.imag(), b.imag()), ymax = std::max(a.imag(), b.imag());
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        const Complex c = poly[k], d = poly[k + 1];
        if (std::max(c.real(), d.real()) < xmin || std::min(c.real(), d.real()) > xmax) continue;
        if (std::max(c.imag(), d.imag()) < ymin || std::min(c.imag(), d.imag()) > ymax) continue;
        if (segment_intersection(a, b, c, d)) return true;
    }
    return false;
}

double polyline_length(std::span<const Complex> poly)
{
    double L = 0.0;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) L += std::abs(poly[k + 1] - poly[k]);
    return L;
}

std::vector<double> real_axis_crossings(std::span<const Complex> poly)
{
    std::vector<double> xs;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        const Complex a = poly[k], b = poly[k + 1];
        if (a.imag() == 0.0) {
            if (k == 0 || poly[k - 1].imag() != 0.0) xs.push_back(a.real());
            continue;
        }
        if ((a.imag() < 0.0) != (b.imag() < 0.0) && b.imag() != 0.0) {
            const double s = a.imag() / (a.imag() - b.imag());
            xs.push_back(a.real() + s * (b.real() - a.real()));
        }
    }
    if (poly.size() > 1 && poly.back().imag() == 0.0 && poly[poly.size() - 2].imag() != 0.0)
        xs.push_back(poly.back().real());
    return xs;
}

int winding_number(std::span<const Complex> closed, Complex p)
{
    const std::size_t n = closed.size();
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "tracer", "winding number needs a closed polyline");
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Complex a = closed[k], b = closed[(k + 1) % n];
        if (distance_to_segment(p, a, b) < 1e-9) throw Error(ErrorCode::PointOnCurve, "tracer", "point on curve");
        total += std::arg((b - p) / (a - p));
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

double directed_hausdorff(std::span<const Complex> a, std::span<const Complex> b)
{
    double worst = 0.0;
    for (Complex p : a) worst = std::max(worst, distance_to_polyline(p, b));
    return worst;
}

}  // namespace varjac::numerics
