#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "varjac/numerics/geometry.hpp"

using namespace varjac;
using namespace varjac::tracer;

namespace {

double angle_between(Complex a, Complex b) { return std::abs(std::arg(a / b)); }

// largest distance from the vertices of a to the smooth curve through b
double curve_gap(const TrajectoryArc& a, const TrajectoryArc& b)
{
    const ArcCurve c = ArcCurve::from_trajectory(b);
    double m = 0.0;
    for (Complex p : a.points) m = std::max(m, c.nearest(p).distance);
    return m;
}

}  // namespace

TEST_CASE("initial directions at both zeros")
{
    for (const auto* fx : {&fixture::figure(), &fixture::real_case()}) {
        const auto& qd = fx->qd;
        for (Zero z : {Zero::Minus, Zero::Plus}) {
            const auto d = initial_directions(qd, z);
            for (int i = 0; i < 3; ++i) {
                CHECK(std::abs(std::abs(d[i]) - 1.0) < 1e-15);
                CHECK(angle_between(d[i], d[(i + 1) % 3]) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-13));
            }
            // probe step: Re of the primitive stays at zero along each direction
            const Complex z0 = qd.zero(z);
            for (Complex dir : d) {
                const Complex z1 = z0 + 1e-6 * dir;
                const std::vector<quaddiff::BranchState> st{{z0, 0.0}, {z1, std::sqrt(qd.R(z1))}};
                const Complex v = quaddiff::integrate_branch(qd, std::span<const quaddiff::BranchState>(st),
                                                             [](Complex t, Complex w) { return w / (t * t - 1.0); });
                CHECK(std::abs(v.real()) < 1e-12);
            }
            // vertical directions bisect the horizontal ones
            const auto vd = vertical_directions(qd, z);
            for (Complex v : vd) {
                double best = 10.0;
                for (Complex h : d) best = std::min(best, angle_between(v, h));
                CHECK(best == doctest::Approx(kPi / 3.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("real fixture: a direction at zeta_+ points toward zeta_-")
{
    const auto d = initial_directions(fixture::real_case().qd, Zero::Plus);
    double best = 10.0;
    for (Complex x : d) best = std::min(best, std::abs(x + 1.0));
    CHECK(best < 1e-12);
}

TEST_CASE("traces from the zeros classify as in the figure")
{
    const auto& qd = fixture::figure().qd;
    // the loop sigma_- uses two of the three prongs, once in each orientation
    int loops = 0, to_plus = 0, winding = 0;
    for (Complex d : initial_directions(qd, Zero::Minus)) {
        const auto a = trace_from_zero(qd, Zero::Minus, d);
        CHECK(a.start == StartTag::ZetaMinus);
        CHECK(a.phase_drift < 1e-7);
        if (a.end == EndTag::ClosedLoop) {
            ++loops;
            CHECK(std::abs(a.points.back() - a.points.front()) < 1e-7);
            const int wn = winding_number(closed_polyline(a), -1.0);
            CHECK(std::abs(wn) == 1);
            winding += wn;
        }
        to_plus += a.end == EndTag::ZetaPlus;
    }
    CHECK(loops == 2);
    CHECK(winding == 0);
    CHECK(to_plus == 1);

    int pole = 0, inf = 0, to_minus = 0;
    for (Complex d : initial_directions(qd, Zero::Plus)) {
        const auto a = trace_from_zero(qd, Zero::Plus, d);
        CHECK(a.phase_drift < 1e-7);
        pole += a.end == EndTag::PolePlus1;
        inf += a.end == EndTag::Infinity;
        to_minus += a.end == EndTag::ZetaMinus;
    }
    CHECK(pole == 1);
    CHECK(inf == 1);
    CHECK(to_minus == 1);
}

TEST_CASE("trace from a regular point conserves the phase")
{
    const auto& f = fixture::figure();
    const quaddiff::BranchCut cut(f.qd, f.graph.gamma);
    for (Complex z : {Complex{0.5, 1.5}, Complex{-2.0, -1.0}}) {
        const Complex w = cut.value(z);
        const Complex v = w / (z * z - 1.0);
        const Complex dir = kI * std::conj(v) / std::abs(v);
        for (Complex d : {dir, -dir}) {
            const auto a = trace(f.qd, z, w, d);
            CHECK(a.start == StartTag::Regular);
            CHECK(a.phase_drift < 1e-7);
            CHECK(a.end != EndTag::Interrupted);
        }
    }
}

TEST_CASE("short trajectory")
{
    const auto& f = fixture::figure();
    const auto& g = f.graph.gamma;
    CHECK(g.points.front() == f.qd.zeta_minus());
    CHECK(g.points.back() == f.qd.zeta_plus());
    const auto xs = numerics::real_axis_crossings(g.points);
    CHECK(!xs.empty());
    for (double x : xs) CHECK(x > 1.0);

    // reversibility: tracing from the other end reproduces the arc
    TrajectoryArc back;
    for (Complex d : initial_directions(f.qd, Zero::Plus)) {
        auto a = trace_from_zero(f.qd, Zero::Plus, d);
        if (a.end == EndTag::ZetaMinus) back = a;
    }
    REQUIRE(!back.points.empty());
    // compared against the smooth arcs: chords alone sag by about 1e-5
    CHECK(curve_gap(back, g) < 1e-6);
    CHECK(curve_gap(g, back) < 1e-6);

    // halving the step leaves the snapped endpoints in place
    TraceOptions fine;
    fine.max_step = 0.5e-2;
    const auto h = short_trajectory(f.qd, fine);
    CHECK(std::abs(h.points.front() - g.points.front()) < 1e-8);
    CHECK(std::abs(h.points.back() - g.points.back()) < 1e-8);
    CHECK(curve_gap(h, g) < 1e-6);
}

TEST_CASE("real fixture: short trajectory is the interval")
{
    const auto& f = fixture::real_case();
    CHECK(f.graph.shape == GraphShape::RealLimit);
    CHECK_FALSE(f.graph.sigma_inf.has_value());
    const double z = std::sqrt(3.0) / 2.0;
    CHECK(std::abs(f.graph.gamma.points.front() + z) < 1e-12);
    CHECK(std::abs(f.graph.gamma.points.back() - z) < 1e-12);
    for (Complex p : f.graph.gamma.points) CHECK(std::abs(p.imag()) < 1e-9);
}

TEST_CASE("critical graph of the figure case")
{
    const auto& f = fixture::figure();
    const auto& g = f.graph;
    CHECK(g.shape == GraphShape::ComplexParameters);
    CHECK(g.gamma.start == StartTag::ZetaMinus);
    CHECK(g.gamma.end == EndTag::ZetaPlus);
    CHECK(g.sigma_minus.end == EndTag::ClosedLoop);
    CHECK(g.sigma_plus.end == EndTag::PolePlus1);
    REQUIRE(g.sigma_inf.has_value());
    CHECK(g.sigma_inf->end == EndTag::Infinity);
    CHECK(winding_number(closed_polyline(g.sigma_minus), -1.0) == 1);
    CHECK(!g.circle_domain_samples.empty());
    CHECK(!g.strip_domain_samples.empty());
    CHECK_NOTHROW(validate_graph(f.qd, g));

    // the primitive is purely imaginary along gamma
    const auto prim = cumulative_primitive(f.qd, g.gamma);
    for (Complex v : prim) CHECK(std::abs(v.real()) < 1e-7);

    // a circle-domain sample traces a closed loop around -1
    const Complex s = g.circle_domain_samples.front();
    const quaddiff::BranchCut cut(f.qd, g.gamma);
    const Complex w = cut.value(s);
    const Complex v = w / (s * s - 1.0);
    const auto a = trace(f.qd, s, w, kI * std::conj(v) / std::abs(v));
    CHECK(a.end == EndTag::ClosedLoop);
}

TEST_CASE("a broken graph is rejected")
{
    const auto& f = fixture::figure();
    auto g = f.graph;
    g.sigma_plus.end = EndTag::Infinity;
    CHECK_THROWS_AS(validate_graph(f.qd, g), Error);
}

TEST_CASE("winding number of the loop")
{
    const auto& g = fixture::figure().graph;
    const auto loop = closed_polyline(g.sigma_minus);
    CHECK(winding_number(loop, -1.0) == 1);
    CHECK(winding_number(loop, 1.0) == 0);
    CHECK(winding_number(loop, Complex{10.0, 10.0}) == 0);
    CHECK_THROWS_AS(winding_number(loop, loop[loop.size() / 2]), Error);
}
