#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixture.hpp"
#include "varjac/numerics/quadrature.hpp"

using namespace varjac;
using namespace varjac::measure;

namespace {

const DiscretizedMeasure& figure_measure(int N)
{
    static std::map<int, DiscretizedMeasure> cache;
    auto it = cache.find(N);
    if (it == cache.end()) {
        const auto& f = fixture::figure();
        it = cache.emplace(N, discretize(f.qd, f.graph.gamma, N)).first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("density: real fixture")
{
    const auto& f = fixture::real_case();
    CHECK(density(f.qd, f.graph.gamma, 0.0) == doctest::Approx(std::sqrt(3.0) / kPi).epsilon(1e-13));
    CHECK(density(f.qd, f.graph.gamma, f.qd.zeta_plus()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(density(f.qd, f.graph.gamma, f.qd.zeta_minus()) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(density(f.qd, f.graph.gamma, Complex{0.0, 0.1}), Error);
}

TEST_CASE("density: square-root vanishing at the zeros")
{
    const auto& f = fixture::figure();
    const ArcMeasure mu(f.qd, f.graph.gamma);
    // density ~ c |z - zeta|^(1/2): the ratio below settles to a constant
    auto ratio = [&](double u) {
        const Complex z = mu.curve().position(u);
        return mu.density_at(z) / std::sqrt(std::abs(z - f.qd.zeta_minus()));
    };
    const double r1 = ratio(1e-3), r2 = ratio(5e-4);
    CHECK(r1 > 0.0);
    CHECK(std::abs(r1 / r2 - 1.0) < 0.05);
}

TEST_CASE("density positive at interior nodes")
{
    const auto& f = fixture::figure();
    const auto& m = figure_measure(512);
    for (Complex z : m.nodes) CHECK(density(f.qd, f.graph.gamma, z) > 0.0);
    for (double w : m.weights) CHECK(w > 0.0);
}

TEST_CASE("discretized mass")
{
    const auto& f = fixture::figure();
    const auto& m512 = figure_measure(512);
    CHECK(std::abs(m512.total_mass - 1.0) < 1e-8);
    const auto m16 = discretize(f.qd, f.graph.gamma, 16);
    CHECK(std::abs(m16.total_mass - m512.total_mass) < 1e-4);
    // nodes sit on the traced arc
    const ArcCurve curve = ArcCurve::from_trajectory(f.graph.gamma);
    for (std::size_t k = 0; k < m512.nodes.size(); k += 7) CHECK(curve.nearest(m512.nodes[k]).distance < 1e-7);
}

TEST_CASE("real fixture: half the mass on [0, sqrt(3)/2]")
{
    const auto& f = fixture::real_case();
    const ArcMeasure mu(f.qd, f.graph.gamma);
    CHECK(std::abs(mu.curve().position(0.5)) < 1e-12);
    const double half = numerics::integrate_interval([&](double u) { return mu.weight_density(u); }, 0.5, 1.0);
    CHECK(std::abs(half - 0.5) < 1e-10);
    CHECK(std::abs(mu.total_mass() - 1.0) < 1e-10);
}

TEST_CASE("Cauchy transform: numeric against closed form")
{
    const auto& f = fixture::figure();
    const auto& m = figure_measure(1024);
    const quaddiff::BranchCut cut(f.qd, f.graph.gamma);
    int used = 0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const Complex z{-2.0 + 4.0 * (i + 0.5) / 10.0, -2.0 + 4.0 * (j + 0.5) / 10.0};
            if (cut.distance(z) < 0.01 || f.qd.distance_to_poles(z) < 0.01) continue;
            ++used;
            CHECK(std::abs(cauchy_numeric(m, z) - cauchy_closed(cut, z)) < 1e-6);
        }
    CHECK(used > 80);

    const Complex far{3e3, 4e3};
    CHECK(std::abs(cauchy_numeric(m, far) * far + m.total_mass) < 1e-3);
    CHECK(std::abs(cauchy_closed(cut, far) * far + 1.0) < 1e-3);
    CHECK_THROWS_AS(cauchy_numeric(m, m.nodes[m.nodes.size() / 2] + 1e-5), Error);
    CHECK_THROWS_AS(cauchy_closed(cut, 1.0), Error);
    // the pole at 1 cancels
    const Complex near1 = cauchy_closed(cut, Complex{1.0 + 1e-6, 0.0});
    const Complex near2 = cauchy_closed(cut, Complex{1.0 + 2e-6, 0.0});
    CHECK(std::abs(near1) < 10.0);
    CHECK(std::abs(near1 - near2) < 1e-4);
}

TEST_CASE("Cauchy transform: real fixture is real on the real axis")
{
    const auto& f = fixture::real_case();
    const auto m = discretize(f.qd, f.graph.gamma, 256);
    CHECK(std::abs(cauchy_numeric(m, 2.0).imag()) < 1e-14);
    CHECK(std::abs(cauchy_closed(f.qd, f.graph.gamma, 2.0).imag()) < 1e-12);
}

TEST_CASE("potential and external field")
{
    const auto& f = fixture::figure();
    const auto& m = figure_measure(512);
    const Complex far{6e5, -8e5};
    CHECK(std::abs(potential(m, far) + std::log(std::abs(far))) < 1e-5);
    const ArcMeasure mu(f.qd, f.graph.gamma);
    CHECK(std::abs(mu.potential(far) + std::log(std::abs(far))) < 1e-5);
    // off the curve the continuous and discrete potentials agree
    CHECK(std::abs(mu.potential({0.0, 2.0}) - potential(m, {0.0, 2.0})) < 1e-8);

    const auto& r = fixture::real_case();
    CHECK(std::abs(external_field(r.qd, 0.0)) < 1e-15);
    CHECK_THROWS_AS(external_field(r.qd, 1.0), Error);
    CHECK_THROWS_AS(external_field(r.qd, -1.0), Error);
}

TEST_CASE("equilibrium on the support and the default contour")
{
    const auto& f = fixture::figure();
    const auto& m = figure_measure(1024);
    const Polyline F = default_test_contour(f.qd, f.graph);
    CHECK_NOTHROW(validate_contour(f.qd, F));
    const auto rep = equilibrium_check(f.qd, f.graph.gamma, F, m);
    CHECK(rep.max_dev_on_gamma < 1e-6);
    CHECK(rep.stdev_on_gamma < 1e-6);
    CHECK(rep.min_margin_on_F >= -1e-6);
    CHECK(rep.min_margin_away_from_zeros > 0.0);

    // the inequality holds for other admissible contours too
    const Polyline F2 = default_test_contour(f.qd, f.graph, 0.05);
    CHECK_NOTHROW(validate_contour(f.qd, F2));
    const auto rep2 = equilibrium_check(f.qd, f.graph.gamma, F2, m);
    CHECK(rep2.min_margin_on_F >= -1e-6);
    CHECK(rep2.min_margin_away_from_zeros > 0.0);

    const Polyline bad{{0.0, 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(validate_contour(f.qd, bad), Error);
}

TEST_CASE("S-property at the middle of the support")
{
    const auto& f = fixture::figure();
    const auto& m = figure_measure(1024);
    const Complex mid = m.source->curve().position(0.5);
    const auto s = s_property_check(f.qd, m, mid, 1e-4);
    CHECK(std::abs(s.d_plus - s.d_minus) < 1e-5);

    // both one-sided derivatives approach -pi times the density with second order
    const double rho = m.source->density_at(mid);
    const auto s2 = s_property_check(f.qd, m, mid, 2e-4);
    const double e1 = std::abs(s.d_plus + kPi * rho) + std::abs(s.d_minus + kPi * rho);
    const double e2 = std::abs(s2.d_plus + kPi * rho) + std::abs(s2.d_minus + kPi * rho);
    CHECK(std::log2(e2 / e1) >= 1.8);

    CHECK_THROWS_AS(s_property_check(f.qd, m, f.qd.zeta_plus(), 1e-4), Error);
}

TEST_CASE("S-property: real fixture is symmetric")
{
    const auto& f = fixture::real_case();
    const auto m = discretize(f.qd, f.graph.gamma, 1024);
    const auto s = s_property_check(f.qd, m, 0.0, 1e-4);
    CHECK(std::abs(s.d_plus - s.d_minus) < 1e-8);
}
