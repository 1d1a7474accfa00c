#pragma once

#include <array>
#include <memory>

#include "varjac/arc.hpp"
#include "varjac/quaddiff.hpp"
#include "varjac/tracer.hpp"

namespace varjac::measure {

using quaddiff::QuadraticDifferential;

// The short trajectory parametrised through its own primitive: u in [0, 1]
// maps to the point where Im of the integral of w/(t^2-1) from zeta_- reaches
// tau(u) times its total, with tau(u) = u^3 (10 - 15u + 6u^2). The cubic
// contact at both ends makes z(u) analytic up to the zeros, so the curve is
// stored as Chebyshev panels whose nodes are located by Newton's method.
class SupportCurve {
public:
    SupportCurve(const QuadraticDifferential& qd, const TrajectoryArc& gamma);

    Complex position(double u) const;
    Complex derivative(double u) const;  // dz/du

    struct Nearest {
        double u = 0.0;
        double distance = 0.0;
        Complex point{};
    };
    Nearest nearest(Complex z) const;

    // Panel end points in u, starting at 0 and ending at 1.
    std::vector<double> breaks() const;
    std::size_t panels() const { return panels_.size(); }
    // Integral of w/(t^2-1) over the whole arc.
    Complex primitive_total() const { return total_; }

    static constexpr int kDegree = 24;

private:
    struct Panel {
        double a = 0.0, b = 0.0;
        std::array<Complex, kDegree + 1> c{};   // Chebyshev coefficients of z
        std::array<Complex, kDegree + 1> dc{};  // ... of dz/du
        std::array<Complex, kDegree + 1> z{};   // values at the Chebyshev points
    };

    Complex locate_point(double tau) const;
    Complex primitive_at(std::size_t k, Complex z) const;
    Panel make_panel(double a, double b) const;
    void build(double a, double b, int depth);
    const Panel& panel_for(double u) const;

    QuadraticDifferential qd_;
    Polyline pts_;
    std::vector<Complex> w_;
    std::vector<Complex> phi_;
    std::vector<double> level_;  // Im(phi) / Im(total), nondecreasing
    Complex total_{};
    std::vector<Panel> panels_;
};

// The limit measure on the short trajectory, with density
// |w| / (2 pi |z^2 - 1|) against arc length.
class ArcMeasure {
public:
    ArcMeasure(const QuadraticDifferential& qd, const TrajectoryArc& gamma);

    const SupportCurve& curve() const { return curve_; }
    const QuadraticDifferential& qd() const { return qd_; }

    // d(mu)/du at curve parameter u (includes |dz/du|).
    double weight_density(double u) const;
    // d(mu)/d(arc length) at a point of the curve.
    double density_at(Complex z) const;
    double total_mass() const;
    // Logarithmic potential by graded adaptive quadrature; valid on and off the curve.
    double potential(Complex z) const;

private:
    QuadraticDifferential qd_;
    SupportCurve curve_;
};

double density(const QuadraticDifferential& qd, const TrajectoryArc& gamma, Complex z_on_gamma);

struct DiscretizedMeasure {
    Polyline nodes;
    std::vector<double> weights;
    double total_mass = 0.0;
    std::shared_ptr<const ArcMeasure> source;  // continuous measure the nodes discretize
};

DiscretizedMeasure discretize(const QuadraticDifferential& qd, const TrajectoryArc& gamma, int N);

Complex cauchy_numeric(const DiscretizedMeasure& m, Complex z);
Complex cauchy_closed(const quaddiff::BranchCut& cut, Complex z);
Complex cauchy_closed(const QuadraticDifferential& qd, const TrajectoryArc& gamma, Complex z);

double potential(const DiscretizedMeasure& m, Complex z);
double external_field(const QuadraticDifferential& qd, Complex z);

struct FieldValue {
    double potential = 0.0;
    double external = 0.0;
    double total = 0.0;
};
FieldValue field_value(const ArcMeasure& mu, Complex z);

struct EquilibriumReport {
    double c_hat = 0.0;
    double max_dev_on_gamma = 0.0;
    double stdev_on_gamma = 0.0;
    double min_margin_on_F = 0.0;
    Complex argmin_on_F{};
    // margin restricted to F points farther than 0.05 from zeta_+-
    double min_margin_away_from_zeros = 0.0;
};

// F runs from -1+i0 through zeta_+, along gamma, through zeta_- to -1-i0.
EquilibriumReport equilibrium_check(const QuadraticDifferential& qd, const TrajectoryArc& gamma,
                                    std::span<const Complex> F, const DiscretizedMeasure& m);

// Default contour: connectors from -1 to the zeros bowed outwards by `offset`,
// joined through gamma. Checked against the critical graph.
Polyline default_test_contour(const QuadraticDifferential& qd, const tracer::CriticalGraph& graph,
                              double offset = 0.1);

// Geometric preconditions on F; throws InvalidContour.
void validate_contour(const QuadraticDifferential& qd, std::span<const Complex> F);

struct SProperty {
    double d_plus = 0.0;
    double d_minus = 0.0;
};

SProperty s_property_check(const QuadraticDifferential& qd, const DiscretizedMeasure& m, Complex z_on_gamma,
                           double h);

}  // namespace varjac::measure
