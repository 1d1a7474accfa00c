#pragma once

#include <cmath>
#include <utility>
#include <span>

#include "varjac/common.hpp"
#include "varjac/error.hpp"
#include "varjac/numerics/gauss_legendre.hpp"

namespace varjac::numerics {

struct QuadratureSpec {
    int order = 16;
    double tolerance = 1e-11;
    int max_depth = 30;

    void validate() const
    {
        if (!(tolerance > 0.0) || order < 4 || order > kMaxGaussOrder || max_depth < 1)
            throw Error(ErrorCode::InvalidArgument, "numerics", "invalid quadrature spec");
    }
};

// Fixed Gauss-Legendre on a real interval; f maps double -> Complex (or double).
template <class F>
auto gauss_fixed(F&& f, double a, double b, int order)
{
    const GaussRule& rule = gauss_legendre(order);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    decltype(f(a)) sum{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace detail {

// Gauss sum together with the sum of |terms|, the scale of rounding error.
template <class F>
auto gauss_with_magnitude(F& f, double a, double b, int order)
{
    const GaussRule& rule = gauss_legendre(order);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    decltype(f(a)) sum{};
    double mag = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto v = rule.weights[i] * f(mid + half * rule.nodes[i]);
        sum += v;
        mag += std::abs(v);
    }
    return std::make_pair(sum * half, mag * std::abs(half));
}

template <class F, class T>
T adapt(F& f, double a, double b, T whole, double abs_tol, double total_width, const QuadratureSpec& spec,
        int depth, double parent_err)
{
    const double m = 0.5 * (a + b);
    const auto [left, mag_l] = gauss_with_magnitude(f, a, m, spec.order);
    const auto [right, mag_r] = gauss_with_magnitude(f, m, b, spec.order);
    const T split = left + right;
    const double err = std::abs(split - whole);
    const double local = abs_tol * std::max((b - a) / total_width, 1e-3);
    // below ~100 ulps of the term magnitudes the estimate is pure rounding noise
    if (err <= local || err <= 1e-14 * (mag_l + mag_r)) return split;
    // Bisection that no longer shrinks the estimate means the integrand itself is
    // noisy at this level (e.g. t - 1 evaluated next to a pole); stop there.
    if (depth >= 4 && err >= 0.9 * parent_err && err <= 1e-10 * (mag_l + mag_r)) return split;
    if (depth >= spec.max_depth) throw Error(ErrorCode::QuadratureFailure, "numerics", "quadrature failure");
    return adapt(f, a, m, left, abs_tol, total_width, spec, depth + 1, err) +
           adapt(f, m, b, right, abs_tol, total_width, spec, depth + 1, err);
}

}  // namespace detail

// Adaptive bisection on [a, b]; the acceptance threshold is
// tolerance * (1 + |coarse estimate|), shared between sub-panels by width.
template <class F>
auto integrate_interval(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    using T = decltype(f(a));
    if (a == b) return T{};
    const T coarse = gauss_fixed(f, a, b, spec.order);
    const double abs_tol = spec.tolerance * (1.0 + std::abs(coarse));
    return detail::adapt<F, T>(f, a, b, coarse, abs_tol, std::abs(b - a), spec, 0, 1e300);
}

// Straight segment integral of f(t) dt from a to b.
template <class F>
Complex integrate_segment(F&& f, Complex a, Complex b, const QuadratureSpec& spec = {})
{
    const Complex d = b - a;
    auto g = [&](double s) -> Complex { return f(a + s * d); };
    return d * integrate_interval(g, 0.0, 1.0, spec);
}

// Sum of segment integrals along a polyline.
template <class F>
Complex integrate_path(F&& f, std::span<const Complex> path, const QuadratureSpec& spec = {})
{
    spec.validate();
    Complex total{};
    for (std::size_t k = 0; k + 1 < path.size(); ++k) total += integrate_segment(f, path[k], path[k + 1], spec);
    return total;
}

}  // namespace varjac::numerics
