#pragma once

#include <optional>
#include <span>

#include "varjac/common.hpp"

namespace varjac::numerics {

double distance_to_segment(Complex p, Complex a, Complex b);
double distance_to_polyline(Complex p, std::span<const Complex> poly);

// Parameter s in [0,1] of the closest point of segment [a,b] to p.
double project_on_segment(Complex p, Complex a, Complex b);

// Proper intersection of [a,b] and [c,d]; returns parameters (s on ab, t on cd).
std::optional<std::pair<double, double>> segment_intersection(Complex a, Complex b, Complex c, Complex d);

// Does the segment [a,b] meet the polyline?
bool segment_crosses_polyline(Complex a, Complex b, std::span<const Complex> poly);

double polyline_length(std::span<const Complex> poly);

// Real-axis crossings (x values) of a polyline.
std::vector<double> real_axis_crossings(std::span<const Complex> poly);

// Discrete winding number of a closed polyline (last point joined to the first).
// Throws PointOnCurve if p lies within 1e-9 of the curve.
int winding_number(std::span<const Complex> closed, Complex p);

// One-sided Hausdorff-style distance: max over points of a of distance to polyline b.
double directed_hausdorff(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace varjac::numerics
