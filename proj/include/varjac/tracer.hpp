#pragma once

#include <array>
#include <functional>
#include <optional>

#include "varjac/arc.hpp"
#include "varjac/quaddiff.hpp"

namespace varjac::tracer {

using quaddiff::QuadraticDifferential;
using quaddiff::Zero;

// Three unit directions at a zero along which horizontal trajectories leave it.
std::array<Complex, 3> initial_directions(const QuadraticDifferential& qd, Zero zero);
// Same for the orthogonal (vertical) foliation.
std::array<Complex, 3> vertical_directions(const QuadraticDifferential& qd, Zero zero);

struct TraceOptions {
    double abs_tol = 1e-10;
    double max_step = 1e-2;         // scaled by max(1, |z|), see the decisions notes
    double start_offset = 1e-6;     // r0 when leaving a zero
    double pole_capture = 1e-5;
    double escape_radius = 1e3;
    double zero_switch = 1e-3;      // start checking arrival at a zero
    double zero_snap = 1e-5;        // connect straight to the zero from here
    double max_arc_length = 1e4;    // measured in the scaled metric |dz|/max(1,|z|)
    int monotone_window = 50;
    bool vertical = false;
    // Optional early stop: called with each new chord; returning true ends the
    // trace with EndTag::Interrupted and the chord's end point kept.
    std::function<bool(Complex, Complex)> stop_on_chord;
};

// Trace from a regular point. w_start^2 = R(start). The sign of the field is
// chosen so that the trace initially moves along `direction`.
TrajectoryArc trace(const QuadraticDifferential& qd, Complex start, Complex w_start, Complex direction,
                    const TraceOptions& opts = {});

// Trace leaving a zero along one of its prongs; the arc starts exactly at the zero.
TrajectoryArc trace_from_zero(const QuadraticDifferential& qd, Zero zero, Complex direction,
                              const TraceOptions& opts = {});

TrajectoryArc short_trajectory(const QuadraticDifferential& qd, const TraceOptions& opts = {});

enum class GraphShape { ComplexParameters, RealLimit };

struct CriticalGraph {
    GraphShape shape = GraphShape::ComplexParameters;
    TrajectoryArc gamma;        // zeta_- -> zeta_+
    TrajectoryArc sigma_minus;  // loop at zeta_-, counterclockwise
    TrajectoryArc sigma_plus;   // zeta_+ -> 1 (real limit: loop at zeta_+ around 1)
    std::optional<TrajectoryArc> sigma_inf;  // zeta_+ -> infinity (absent in the real limit)
    Polyline circle_domain_samples;
    Polyline strip_domain_samples;
};

struct GraphOptions {
    TraceOptions trace;
    bool check_samples = true;  // trace through a few domain samples
    bool parallel = true;
};

CriticalGraph build_critical_graph(const QuadraticDifferential& qd, const GraphOptions& opts = {});

// Structural checks on an assembled graph; throws GraphMismatch on failure.
void validate_graph(const QuadraticDifferential& qd, const CriticalGraph& g);

// Closed polyline of an arc that ends where it started.
Polyline closed_polyline(const TrajectoryArc& arc);

int winding_number(std::span<const Complex> closed, Complex p);

// Running value of the integral of w/(t^2-1) along an arc, one entry per point.
std::vector<Complex> cumulative_primitive(const QuadraticDifferential& qd, const TrajectoryArc& arc);

}  // namespace varjac::tracer
