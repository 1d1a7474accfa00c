#pragma once

#include <string>
#include <vector>

#include "varjac/common.hpp"

namespace varjac {

enum class StartTag { ZetaMinus, ZetaPlus, Regular };
enum class EndTag { ZetaMinus, ZetaPlus, PoleMinus1, PolePlus1, Infinity, ClosedLoop, Interrupted };

const char* to_string(StartTag t);
const char* to_string(EndTag t);

// A traced trajectory. w_values[k]^2 = R(points[k]); w is zero exactly at
// snapped zeros of R.
struct TrajectoryArc {
    Polyline points;
    std::vector<Complex> w_values;
    StartTag start = StartTag::Regular;
    Complex start_point{};
    EndTag end = EndTag::Interrupted;
    double arc_length = 0.0;
    double phase_drift = 0.0;
    bool vertical = false;  // orthogonal trajectory (Im of the primitive conserved)
};

// Smooth C^1 representation of an arc: cubic Hermite pieces through the
// vertices with tangents taken from the trajectory field, parametrised by
// cumulative chord length.
class ArcCurve {
public:
    ArcCurve() = default;
    ArcCurve(Polyline points, std::vector<Complex> unit_tangents);

    static ArcCurve from_trajectory(const TrajectoryArc& arc);

    double length() const { return knots_.empty() ? 0.0 : knots_.back(); }
    std::size_t segments() const { return points_.empty() ? 0 : points_.size() - 1; }
    double knot(std::size_t k) const { return knots_[k]; }
    const Polyline& points() const { return points_; }

    Complex position(double s) const;
    Complex derivative(double s) const;  // dz/ds

    struct Nearest {
        double s = 0.0;
        double distance = 0.0;
        Complex point{};
    };
    Nearest nearest(Complex z) const;

    // Polyline sampling each Hermite piece at `per_segment` sub-intervals.
    Polyline dense(int per_segment) const;

private:
    std::size_t locate(double s) const;
    Complex eval_piece(std::size_t k, double t) const;
    Complex deriv_piece(std::size_t k, double t) const;

    Polyline points_;
    std::vector<Complex> tangents_;
    std::vector<double> knots_;
};

}  // namespace varjac
