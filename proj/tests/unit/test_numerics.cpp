#include <doctest.h>

#include <cmath>
#include <random>

#include "fixture.hpp"
#include "varjac/jacobi.hpp"
#include "varjac/numerics/geometry.hpp"
#include "varjac/numerics/newton.hpp"
#include "varjac/numerics/ode.hpp"
#include "varjac/numerics/quadrature.hpp"

using namespace varjac;
using namespace varjac::numerics;

TEST_CASE("integral of dz is the endpoint difference")
{
    const Polyline path{{0.3, -1.0}, {2.0, 0.5}, {-1.0, 2.0}, {-0.7, -0.2}};
    const Complex v = integrate_path([](Complex) { return Complex{1.0, 0.0}; }, path);
    CHECK(std::abs(v - (path.back() - path.front())) < 1e-14);
}

TEST_CASE("dz/z around the unit circle")
{
    Polyline c = fixture::circle(0.0, 1.0, 64);
    c.push_back(c.front());
    const Complex v = integrate_path([](Complex z) { return 1.0 / z; }, c);
    CHECK(std::abs(v - 2.0 * kPi * kI) < 1e-12);
}

TEST_CASE("large circle picks up the residue at infinity")
{
    const auto& f = fixture::figure();
    const auto p = f.qd.params();
    const auto cut = quaddiff::BranchCut(f.qd, f.graph.gamma);
    Polyline c = fixture::circle(0.0, 10.0, 128);
    c.push_back(c.front());
    const Complex v = integrate_path([&](Complex t) { return cut.value(t) / (t * t - 1.0); }, c);
    const Complex expected = 2.0 * kPi * kI * (p.A + p.B + 2.0);
    CHECK(std::min(std::abs(v - expected), std::abs(v + expected)) < 1e-9);
    // same value through quaddiff::period with its own continuation
    const Complex w0 = cut.value(c.front());
    const Complex per = quaddiff::period(f.qd, std::span<const Complex>(c.data(), c.size() - 1), w0);
    CHECK(std::abs(per - v) < 1e-9);
}

TEST_CASE("Gauss-Legendre rules are exact for degree 2*order-1")
{
    for (int order : {4, 8, 16, 32}) {
        const int deg = 2 * order - 1;
        const double v = gauss_fixed([deg](double x) { return std::pow(x, deg) + std::pow(x, deg - 1); }, 0.0, 1.0, order);
        CHECK(std::abs(v - (1.0 / (deg + 1) + 1.0 / deg)) < 1e-14);
    }
    const auto& r = gauss_legendre(16);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("invalid quadrature spec is rejected")
{
    QuadratureSpec s;
    s.order = 2;
    const Polyline path{0.0, 1.0};
    CHECK_THROWS_AS(integrate_path([](Complex) { return Complex{1.0}; }, path, s), Error);
}

namespace {

Complex flow_circle(double tol)
{
    DormandPrince dp(tol);
    auto f = [](Complex z) { return kI * z; };
    Complex z = 1.0;
    double s = 0.0, h = 1e-3;
    const double end = 2.0 * kPi;
    while (s < end) {
        const auto r = dp.step(f, z, h, end - s);
        z = r.z;
        s += r.h_used;
        h = r.h_next;
    }
    return z;
}

}  // namespace

TEST_CASE("circle flow returns to its start")
{
    CHECK(std::abs(flow_circle(1e-12) - 1.0) < 1e-9);
    // tightening the tolerance tightens the global error
    const double e1 = std::abs(flow_circle(1e-7) - 1.0), e2 = std::abs(flow_circle(1e-9) - 1.0);
    CHECK(e2 < e1);
}

TEST_CASE("single adaptive step")
{
    auto f = [](Complex z) { return z; };
    const auto r = ode_step_adaptive(f, 1.0, 0.1, 1e-12);
    CHECK(std::abs(r.z - std::exp(r.h_used)) < 1e-11);
    CHECK(r.h_used <= 0.1);
}

TEST_CASE("Newton on z^2 - 2")
{
    const Complex r = newton_polish([](Complex z) { return z * z - 2.0; }, [](Complex z) { return 2.0 * z; }, 1.5);
    CHECK(std::abs(r - std::sqrt(2.0)) < 1e-14);
    CHECK_THROWS_AS(newton_polish([](Complex) { return Complex{1.0}; }, [](Complex) { return Complex{}; }, 0.0), Error);
}

TEST_CASE("Newton polishes a root of p_50")
{
    const auto spec = jacobi::VaryingJacobiSpec::make(50, {-1.1, 0.1}, 1.0);
    const auto rs = jacobi::roots(spec);
    for (int k : {0, 17, 33}) {
        const Complex crude = rs.roots[k] + Complex{1e-3, -1e-3};
        const Complex z = newton_polish([&](Complex x) { return jacobi::eval_stable(spec, x).value; },
                                        [&](Complex x) { return jacobi::eval_stable(spec, x).derivative; }, crude);
        CHECK(std::abs(jacobi::newton_ratio(spec, z)) < 1e-10);
    }
}

TEST_CASE("winding numbers")
{
    const Polyline c = fixture::circle(0.0, 1.0, 64);
    CHECK(winding_number(c, 0.0) == 1);
    CHECK(winding_number(c, 2.0) == 0);
    Polyline cw(c.rbegin(), c.rend());
    CHECK(winding_number(cw, 0.0) == -1);
    CHECK_THROWS_AS(winding_number(c, 1.0), Error);
}

TEST_CASE("segment geometry")
{
    CHECK(distance_to_segment({0.5, 1.0}, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(segment_intersection(0.0, {1.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}).has_value());
    CHECK_FALSE(segment_intersection(0.0, 1.0, {0.0, 1.0}, {1.0, 1.0}).has_value());
    const Polyline zig{{0.0, 1.0}, {1.0, -1.0}, {2.0, 1.0}};
    const auto xs = real_axis_crossings(zig);
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == doctest::Approx(0.5));
    CHECK(xs[1] == doctest::Approx(1.5));
}
