#include <doctest.h>

#include <cmath>
#include <random>

#include "fixture.hpp"
#include "varjac/strip_map.hpp"
#include "varjac/verify.hpp"

using namespace varjac;
using namespace varjac::quaddiff;

namespace {

bool inside_scope(const ParameterPair& p)
{
    return p.A.imag() > 0.0 && p.A.real() > -1.0 - p.B / 2.0 && p.B > 0.0;
}

double dist_to_pm(Complex v, Complex target) { return std::min(std::abs(v - target), std::abs(v + target)); }

}  // namespace

TEST_CASE("normalize: figure case is already normalized")
{
    const auto n = normalize({-1.1, 0.1}, 1.0);
    CHECK(n.transform.identity());
    CHECK(n.params.A == Complex{-1.1, 0.1});
    CHECK(n.params.normalized);
}

TEST_CASE("normalize: conjugate half-plane")
{
    const auto n = normalize({-1.1, -0.1}, 1.0);
    REQUIRE(n.transform.maps.size() == 1);
    CHECK(n.transform.maps[0] == AtomicMap::Conjugate);
    CHECK(n.params.A == Complex{-1.1, 0.1});
    const auto back = n.transform.apply(n.params);
    CHECK(back.A == Complex{-1.1, -0.1});
}

TEST_CASE("normalize: far-left A goes through the Moebius map")
{
    const auto n = normalize({-3.0, 0.5}, 1.0);
    CHECK(inside_scope(n.params));
    CHECK(std::abs(n.params.A - Complex{0.0, 0.5}) < 1e-15);
    bool moebius = false;
    for (auto m : n.transform.maps) moebius = moebius || m == AtomicMap::Moebius;
    CHECK(moebius);
    const auto back = n.transform.apply(n.params);
    CHECK(std::abs(back.A - Complex{-3.0, 0.5}) < 1e-14);
    CHECK(back.B == doctest::Approx(1.0));
}

TEST_CASE("normalize: random inputs land in scope and map back")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-6.0, 4.0), im(-2.0, 2.0), b(0.2, 3.0);
    for (int k = 0; k < 200; ++k) {
        const Complex A{re(rng), im(rng)};
        const double B = b(rng);
        if (std::abs(A.imag()) < 1e-3 || std::abs(A.real() + 1.0 + B / 2.0) < 1e-3) continue;
        const auto n = normalize(A, B);
        CHECK(inside_scope(n.params));
        const auto back = n.transform.apply(n.params);
        CHECK(std::abs(back.A - A) < 1e-12 * (1.0 + std::abs(A)));
    }
}

TEST_CASE("normalize rejects real A and non-positive B")
{
    CHECK_THROWS_AS(normalize({-1.1, 0.0}, 1.0), Error);
    CHECK_THROWS_AS(normalize({-1.1, 1e-13}, 1.0), Error);
    CHECK_THROWS_AS(normalize({-1.1, 0.1}, 0.0), Error);
    CHECK_THROWS_AS(normalize({-1.1, 0.1}, -2.0), Error);
    try {
        normalize({0.5, 0.0}, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParametersOutOfScope);
    }
}

TEST_CASE("Moebius map is an involution")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
        const Complex z{u(rng), u(rng)};
        if (std::abs(z - 1.0) < 1e-3) continue;
        const Complex back = apply_map(AtomicMap::Moebius, apply_map(AtomicMap::Moebius, z));
        CHECK(std::abs(back - z) < 1e-12 * (1.0 + std::abs(z)));
    }
    const ParameterPair p{{0.3, 0.7}, 1.5};
    const auto q = apply_map(AtomicMap::Moebius, apply_map(AtomicMap::Moebius, p));
    CHECK(std::abs(q.A - p.A) < 1e-15);
    CHECK(q.B == p.B);
}

TEST_CASE("R at the poles: polynomial identities")
{
    const auto pairs = verify::random_normalized_pairs(11, 1000);
    for (const auto& rp : pairs) {
        const auto p = normalize(rp.A, rp.B).params;
        const auto qd = QuadraticDifferential::build(p);
        CHECK(std::abs(qd.R_poly(1.0) - 4.0 * p.A * p.A) <= 1e-13 * std::abs(4.0 * p.A * p.A) + 1e-15);
        CHECK(std::abs(qd.R_poly(-1.0) - 4.0 * p.B * p.B) <= 1e-13 * 4.0 * p.B * p.B);
        const double scale = std::max({std::abs(qd.r_coeffs()[0]), std::abs(qd.r_coeffs()[1]), std::abs(qd.r_coeffs()[2])}, std::less<double>{});
        CHECK(std::abs(qd.R_poly(qd.zeta_minus())) <= 1e-12 * scale);
        CHECK(std::abs(qd.R_poly(qd.zeta_plus())) <= 1e-12 * scale);
    }
}

TEST_CASE("zeros of R: real fixture and figure case")
{
    const auto qd = QuadraticDifferential::build(real_limit(1.0, 1.0));
    CHECK(std::abs(qd.zeta_minus() + std::sqrt(3.0) / 2.0) < 1e-15);
    CHECK(std::abs(qd.zeta_plus() - std::sqrt(3.0) / 2.0) < 1e-15);
    CHECK(std::abs(qd.R(0.0) + 12.0) < 1e-13);

    const auto& f = fixture::figure().qd;
    CHECK(f.zeta_minus().imag() < 0.0);
    CHECK(f.zeta_minus() != f.zeta_plus());
    CHECK(f.distance_to_poles(f.zeta_minus()) > 1e-3);
    CHECK(f.distance_to_poles(f.zeta_plus()) > 1e-3);
    CHECK(f.residue_at_inf() == f.params().A + 3.0);
}

TEST_CASE("discriminant root branch")
{
    for (double a : {1.5, 2.0, 10.0})
        for (double b : {0.5, 1.0, 3.0}) {
            const Complex d = discriminant_root(a, b);
            CHECK(d.real() > 0.0);
            CHECK(std::abs(d.imag()) < 1e-14 * d.real());
        }
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-5.0, 5.0), im(1e-3, 5.0), bb(0.1, 4.0);
    int on_slit = 0;
    for (int k = 0; k < 10000; ++k) {
        const double B = bb(rng);
        const Complex d = discriminant_root({re(rng), im(rng)}, B);
        const bool slit = std::abs(d.real()) < 1e-12 && d.imag() >= 0.0 && d.imag() <= 0.5 * B * std::sqrt(B + 1.0);
        on_slit += slit;
    }
    CHECK(on_slit == 0);
}

TEST_CASE("square-root continuation and monodromy")
{
    const auto& qd = fixture::figure().qd;
    const Complex z0 = qd.zeta_plus() + 0.3;
    const Complex w0 = std::sqrt(qd.R(z0));

    const Polyline still{z0, z0, z0};
    auto s = continue_sqrt(qd, still, w0);
    CHECK(s.back().w == w0);

    Polyline one = fixture::circle(qd.zeta_plus(), 0.3, 64);
    one.push_back(one.front());
    s = continue_sqrt(qd, one, w0);
    CHECK(std::abs(s.back().w + w0) < 1e-12 * std::abs(w0));
    for (const auto& st : s) CHECK(std::abs(st.w * st.w - qd.R(st.z)) <= 1e-10 * (1.0 + std::abs(qd.R(st.z))));

    const Complex mid = 0.5 * (qd.zeta_minus() + qd.zeta_plus());
    const double r = 0.5 * std::abs(qd.zeta_plus() - qd.zeta_minus()) + 5.0;
    Polyline both = fixture::circle(mid, r, 256);
    both.push_back(both.front());
    const Complex wb = std::sqrt(qd.R(both.front()));
    s = continue_sqrt(qd, both, wb);
    CHECK(std::abs(s.back().w - wb) < 1e-12 * std::abs(wb));

    const Polyline through{qd.zeta_plus() - 0.1, qd.zeta_plus() + 0.1};
    CHECK_THROWS_AS(continue_sqrt(qd, through, std::sqrt(qd.R(through[0]))), Error);
}

TEST_CASE("global branch normalization")
{
    const auto& f = fixture::figure();
    const BranchCut cut(f.qd, f.graph.gamma);
    const Complex A = f.qd.params().A;
    CHECK(std::abs(cut.value(1.0) - 2.0 * A) < 1e-9);
    CHECK(std::abs(cut.value(-1.0) + 2.0) < 1e-9);
    const Complex far = 1e6;
    CHECK(std::abs(cut.value(far) / far / (A + 3.0) - 1.0) < 1e-5);
    CHECK(std::abs(global_branch(f.qd, f.graph.gamma, {0.0, 2.0}) - cut.value({0.0, 2.0})) < 1e-12);
    CHECK_THROWS_AS(cut.value(f.graph.gamma.points[f.graph.gamma.points.size() / 2]), Error);
    CHECK(std::abs(cut.quartic_ratio(1e8) - 1.0) < 1e-7);
}

TEST_CASE("global branch endpoint values for random pairs")
{
    for (const auto& rp : verify::random_normalized_pairs(19, 5)) {
        const auto p = normalize(rp.A, rp.B).params;
        const auto qd = QuadraticDifferential::build(p);
        const auto g = tracer::build_critical_graph(qd);
        const BranchCut cut(qd, g.gamma);
        CHECK(std::abs(cut.value(1.0) - 2.0 * p.A) < 1e-9);
        CHECK(std::abs(cut.value(-1.0) + 2.0 * p.B) < 1e-9);
    }
}

TEST_CASE("periods")
{
    const auto& f = fixture::figure();
    const auto& qd = f.qd;
    const Complex A = qd.params().A;
    const double B = qd.params().B;
    const BranchCut cut(qd, f.graph.gamma);

    SUBCASE("small circle around -1")
    {
        const Polyline c = fixture::circle(-1.0, 0.05, 128);
        const Complex v = period(qd, c, cut.value(c.front()));
        CHECK(dist_to_pm(v, 2.0 * kPi * kI * B) < 1e-9);
    }
    SUBCASE("small circle around +1")
    {
        const Polyline c = fixture::circle(1.0, 0.05, 128);
        const Complex v = period(qd, c, cut.value(c.front()));
        CHECK(dist_to_pm(v, 2.0 * kPi * kI * A) < 1e-9);
    }
    SUBCASE("contractible cycle")
    {
        const Polyline c = fixture::circle({2.0, 2.0}, 0.1, 64);
        CHECK(std::abs(period(qd, c, cut.value(c.front()))) < 1e-9);
    }
    SUBCASE("one-sided integral along the short trajectory")
    {
        const Complex v = arc_integral(qd, f.graph.gamma);
        CHECK(dist_to_pm(v, 2.0 * kPi * kI) < 1e-8);
    }
    SUBCASE("cycle hugging the short trajectory")
    {
        // offset the arc to both sides, joined by small arcs around the zeros
        const Polyline dense = cut.curve().dense(4);
        const double d = 0.01;
        Polyline cyc;
        auto normal = [&](std::size_t k) {
            const Complex t = dense[std::min(k + 1, dense.size() - 1)] - dense[k == 0 ? 0 : k - 1];
            return kI * t / std::abs(t);
        };
        for (std::size_t k = 0; k < dense.size(); ++k) {
            const double a = std::min({1.0, std::abs(dense[k] - dense.front()) / d, std::abs(dense[k] - dense.back()) / d});
            if (a < 1.0) continue;
            cyc.push_back(dense[k] + d * normal(k));
        }
        const Complex tz = (dense.back() - dense[dense.size() - 2]) / std::abs(dense.back() - dense[dense.size() - 2]);
        for (int j = 1; j < 16; ++j) cyc.push_back(dense.back() + d * kI * tz * std::polar(1.0, -kPi * j / 16.0));
        for (std::size_t k = dense.size(); k-- > 0;) {
            const double a = std::min({1.0, std::abs(dense[k] - dense.front()) / d, std::abs(dense[k] - dense.back()) / d});
            if (a < 1.0) continue;
            cyc.push_back(dense[k] - d * normal(k));
        }
        const Complex t0 = (dense[1] - dense[0]) / std::abs(dense[1] - dense[0]);
        for (int j = 1; j < 16; ++j) cyc.push_back(dense.front() - d * kI * t0 * std::polar(1.0, -kPi * j / 16.0));
        const Complex v = period(qd, cyc, std::sqrt(qd.R(cyc.front())));
        // both sides of the cut contribute the one-sided value
        CHECK(dist_to_pm(v, 4.0 * kPi * kI) < 1e-8);
    }
}

TEST_CASE("strip map")
{
    const auto& f = fixture::figure();
    const StripMap sm(f.qd, f.graph);
    const double W = sm.width();
    CHECK(W == doctest::Approx(2.0 * kPi * 0.1));
    REQUIRE(!f.graph.strip_domain_samples.empty());
    for (Complex z : f.graph.strip_domain_samples) {
        const Complex v = sm(z);
        CHECK(v.real() > 0.0);
        CHECK(v.real() < W);
    }
    // phi vanishes where sigma_hat leaves zeta_+; along sigma_hat (an orthogonal
    // trajectory) the imaginary part stays put while the real part crosses the strip
    // (the last vertex is where a chord meets sigma_-, off the trajectory itself)
    const auto& vals = sm.sigma_hat_values();
    REQUIRE(vals.size() > 2);
    CHECK(std::abs(vals.front()) < 1e-12);
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) CHECK(std::abs(vals[k].imag()) < 1e-7);
    for (Complex v : vals) {
        CHECK(v.real() > -1e-9);
        CHECK(v.real() < W + 1e-9);
    }
    CHECK(std::abs(sm.sigma_hat_values().back().real() - W) < 1e-5);
    CHECK_THROWS_AS(sm(Complex{-1.0, 0.01}), Error);
}
