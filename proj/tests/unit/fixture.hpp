#pragma once

#include "varjac/measure.hpp"
#include "varjac/quaddiff.hpp"
#include "varjac/tracer.hpp"

namespace fixture {

using namespace varjac;

// The figure case A = -1.1 + 0.1i, B = 1, built once per test binary.
struct Figure {
    quaddiff::QuadraticDifferential qd;
    tracer::CriticalGraph graph;
};

inline const Figure& figure()
{
    static const Figure f = [] {
        const auto n = quaddiff::normalize({-1.1, 0.1}, 1.0);
        Figure out{quaddiff::QuadraticDifferential::build(n.params), {}};
        out.graph = tracer::build_critical_graph(out.qd);
        return out;
    }();
    return f;
}

// A = B = 1, the real sanity limit.
inline const Figure& real_case()
{
    static const Figure f = [] {
        Figure out{quaddiff::QuadraticDifferential::build(quaddiff::real_limit(1.0, 1.0)), {}};
        out.graph = tracer::build_critical_graph(out.qd);
        return out;
    }();
    return f;
}

inline Polyline circle(Complex c, double r, int n = 256)
{
    Polyline p;
    for (int k = 0; k < n; ++k) p.push_back(c + std::polar(r, 2.0 * kPi * k / n));
    return p;
}

}  // namespace fixture
