#include <doctest.h>

#include <cmath>
#include <random>

#include "fixture.hpp"
#include "varjac/jacobi.hpp"
#include "varjac/verify.hpp"

using namespace varjac;
using namespace varjac::jacobi;

namespace {

const Complex kA{-1.1, 0.1};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// generalized binomial C(x, k) as a falling product
Complex binom(Complex x, int k)
{
    Complex r = 1.0;
    for (int j = 0; j < k; ++j) r *= (x - static_cast<double>(j)) / static_cast<double>(j + 1);
    return r;
}

Complex falling(Complex a, int k)
{
    Complex r = 1.0;
    for (int j = 0; j < k; ++j) r *= a - static_cast<double>(j);
    return r;
}

// Rodrigues formula with the n-th derivative expanded by Leibniz' rule
Complex rodrigues(int n, Complex alpha, Complex beta, Complex z)
{
    Complex s{};
    for (int k = 0; k <= n; ++k) {
        const Complex d1 = (k % 2 ? -1.0 : 1.0) * falling(alpha + static_cast<double>(n), k);
        const Complex d2 = falling(beta + static_cast<double>(n), n - k);
        s += binom(static_cast<double>(n), k) * d1 * d2 * std::pow(1.0 - z, n - k) * std::pow(1.0 + z, k);
    }
    double fact = 1.0;
    for (int j = 2; j <= n; ++j) fact *= j;
    return (n % 2 ? -1.0 : 1.0) * s / (std::ldexp(1.0, n) * fact);
}

}  // namespace

TEST_CASE("low degrees")
{
    const auto s0 = VaryingJacobiSpec::make(0, kA, 1.0);
    const auto v0 = eval_recurrence(s0, {0.3, 0.2});
    CHECK(v0.value == Complex{1.0});
    CHECK(v0.derivative == Complex{});

    const auto s1 = VaryingJacobiSpec::make(1, kA, 1.0);
    const Complex a = s1.alpha(), b = s1.beta(), z{0.7, -0.4};
    CHECK(rel(eval_recurrence(s1, z).value, ((a + b + 2.0) * z + (a - b)) / 2.0) < 1e-15);
    const auto rs = roots(s1);
    REQUIRE(rs.roots.size() == 1);
    CHECK(std::abs(rs.roots[0] - (b - a) / (a + b + 2.0)) < 1e-14);

    const auto r11 = roots(VaryingJacobiSpec::make(1, 1.0, 1.0));
    CHECK(std::abs(r11.roots[0]) < 1e-15);
}

TEST_CASE("recurrence, explicit sum, stable evaluation and Rodrigues agree")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int n = 1; n <= 8; ++n) {
        const auto s = VaryingJacobiSpec::make(n, kA, 1.0);
        for (int k = 0; k < 100; ++k) {
            const Complex z{u(rng), u(rng)};
            const Complex ex = eval_explicit(s, z);
            CHECK(rel(eval_recurrence(s, z).value, ex) < 1e-10);
            CHECK(rel(eval_stable(s, z).value, ex) < 1e-10);
            if (k < 10 && n <= 5) CHECK(rel(rodrigues(n, s.alpha(), s.beta(), z), ex) < 1e-8);
        }
    }
}

TEST_CASE("explicit sum at the endpoints")
{
    for (int n = 1; n <= 10; ++n) {
        const auto s = VaryingJacobiSpec::make(n, kA, 1.0);
        CHECK(rel(eval_explicit(s, 1.0), binom(s.alpha() + static_cast<double>(n), n)) < 1e-12);
        // at -1 only the last term survives, with the sign (-1)^n
        const Complex at_m1 = (n % 2 ? -1.0 : 1.0) * binom(s.beta() + static_cast<double>(n), n);
        CHECK(rel(eval_explicit(s, -1.0), at_m1) < 1e-12);
    }
    CHECK_THROWS_AS(eval_explicit(VaryingJacobiSpec::make(kExplicitMaxDegree + 1, kA, 1.0), 0.0), Error);
}

TEST_CASE("stable evaluation: derivative, logarithm and Newton ratio")
{
    const auto s = VaryingJacobiSpec::make(40, kA, 1.0);
    const Complex z{0.4, 0.9};
    const auto v = eval_stable(s, z);
    const double h = 1e-6;
    const Complex fd = (eval_stable(s, z + h).value - eval_stable(s, z - h).value) / (2.0 * h);
    CHECK(rel(v.derivative, fd) < 1e-7);
    CHECK(std::abs(std::exp(log_eval_stable(s, z)) - v.value) < 1e-12 * std::abs(v.value));
    CHECK(rel(newton_ratio(s, z), v.value / v.derivative) < 1e-12);
    CHECK(stable_precision(s, z) >= 53);

    // large degree far from the zeros: the log stays finite where the value overflows
    const auto big = VaryingJacobiSpec::make(200, kA, 1.0);
    CHECK(std::isfinite(log_eval_stable(big, 50.0).real()));
    CHECK(log_eval_stable(big, 50.0).real() > 700.0);
}

TEST_CASE("roots: small degrees against the companion matrix")
{
    for (int n = 1; n <= 8; ++n) {
        const auto rs = roots(VaryingJacobiSpec::make(n, kA, 1.0));
        CHECK(static_cast<int>(rs.roots.size()) == n);
        CHECK(rs.residual < 1e-8);
        auto comp = verify::companion_roots(verify::explicit_coefficients(n, kA, 1.0));
        REQUIRE(comp.size() == static_cast<std::size_t>(n));
        for (Complex r : rs.roots) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < comp.size(); ++j)
                if (std::abs(comp[j] - r) < std::abs(comp[best] - r)) best = j;
            CHECK(std::abs(comp[best] - r) < 1e-8);
            comp.erase(comp.begin() + static_cast<long>(best));
        }
    }
}

TEST_CASE("roots: degree 50 cluster on the short trajectory")
{
    const auto rs = roots(VaryingJacobiSpec::make(50, kA, 1.0));
    CHECK(rs.roots.size() == 50);
    CHECK(rs.residual < 1e-8);
    const ArcCurve curve = ArcCurve::from_trajectory(fixture::figure().graph.gamma);
    int close = 0;
    for (Complex r : rs.roots) close += curve.nearest(r).distance <= 0.1;
    CHECK(close >= 45);
    // deterministic
    const auto again = roots(VaryingJacobiSpec::make(50, kA, 1.0));
    CHECK(again.roots == rs.roots);
    CHECK_THROWS_AS(roots(VaryingJacobiSpec::make(kMaxRootDegree + 1, kA, 1.0)), Error);
}

TEST_CASE("counting measure")
{
    const auto rs = roots(VaryingJacobiSpec::make(1, 1.0, 1.0));
    const auto m = counting_measure(rs);
    CHECK(m.total_mass == doctest::Approx(1.0).epsilon(1e-15));
    const Complex z{0.3, -2.0};
    CHECK(std::abs(measure::potential(m, z) + std::log(std::abs(z))) < 1e-14);

    const auto m7 = counting_measure(roots(VaryingJacobiSpec::make(7, kA, 1.0)));
    CHECK(m7.nodes.size() == 7);
    CHECK(std::abs(m7.total_mass - 1.0) < 1e-15);
}

TEST_CASE("orthogonality on the test contour")
{
    const auto& f = fixture::figure();
    const Polyline F = measure::default_test_contour(f.qd, f.graph);
    const Polyline F2 = measure::default_test_contour(f.qd, f.graph, 0.15);
    const auto s = VaryingJacobiSpec::make(3, kA, 1.0);
    const auto mom = orthogonality_moments(s, F, 3);
    const auto mom2 = orthogonality_moments(s, F2, 3);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        CHECK(mom[k].relative() < 1e-6);
        worst = std::max(worst, mom[k].relative());
        CHECK(std::abs(orthogonality_residual(s, F, k).moment - mom[k].moment) <= 1e-12 * mom[k].scale);
    }
    CHECK(mom[3].relative() > 1e3 * worst);
    // deforming the contour leaves the moments unchanged
    for (int k = 0; k <= 3; ++k)
        CHECK(std::abs(mom[k].moment - mom2[k].moment) < 1e-8 * std::max(mom[k].scale, mom2[k].scale));
}

TEST_CASE("strong asymptotics")
{
    const auto& f = fixture::figure();
    const quaddiff::BranchCut cut(f.qd, f.graph.gamma);
    const Complex z1{2.0, 1.0}, z2{-1.5, -1.0};
    double prev = 1e300;
    for (int n : {20, 40, 80}) {
        const auto r = strong_ratio_check(VaryingJacobiSpec::make(n, kA, 1.0), cut, z1, z2);
        CHECK(r.rel_err < prev);
        prev = r.rel_err;
    }
    CHECK(prev < 0.05);
    // a path through the support is refused
    CHECK_THROWS_AS(strong_ratio_check(VaryingJacobiSpec::make(20, kA, 1.0), cut, f.graph.gamma.points[5], z2), Error);
}

TEST_CASE("strong asymptotics: real fixture respects conjugation")
{
    const auto& f = fixture::real_case();
    const quaddiff::BranchCut cut(f.qd, f.graph.gamma);
    const auto r = strong_ratio_check(VaryingJacobiSpec::make(20, 1.0, 1.0), cut, {2.0, 1.0}, {2.0, -1.0});
    CHECK(std::abs(std::abs(r.predicted) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(r.actual) - 1.0) < 1e-10);
}

TEST_CASE("|G| is continuous across the support")
{
    const auto& f = fixture::figure();
    const quaddiff::BranchCut cut(f.qd, f.graph.gamma);
    const ArcCurve& c = cut.curve();
    const Complex ref{0.0, 3.0};
    for (double frac : {0.3, 0.5, 0.7}) {
        const double s = frac * c.length();
        const Complex p = c.position(s);
        const Complex nrm = kI * c.derivative(s) / std::abs(c.derivative(s));
        const double d = 1e-6;
        const double up = log_g_difference(cut, p + d * nrm, ref).real();
        const double dn = log_g_difference(cut, p - d * nrm, ref).real();
        CHECK(std::abs(up - dn) < 1e-5);
    }
}
