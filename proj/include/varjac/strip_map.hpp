#pragma once

#include "varjac/quaddiff.hpp"
#include "varjac/tracer.hpp"

namespace varjac::quaddiff {

// The conformal map of the strip domain onto {0 < Re < 2 pi Im A}. Built once
// per graph: the orthogonal trajectory sigma_hat leaving zeta_+ (continuing
// sigma_+ across the zero) is traced and its primitive tabulated; phi(z) then
// follows the horizontal trajectory through z to sigma_hat.
class StripMap {
public:
    StripMap(const QuadraticDifferential& qd, const tracer::CriticalGraph& graph);

    // Throws NotInStripDomain outside the strip domain.
    Complex operator()(Complex z) const;

    double width() const { return 2.0 * kPi * qd_.params().A.imag(); }
    const TrajectoryArc& sigma_hat() const { return sigma_hat_; }
    const std::vector<Complex>& sigma_hat_values() const { return phi_hat_; }
    bool in_strip_domain(Complex z) const;

private:
    QuadraticDifferential qd_;
    const tracer::CriticalGraph* graph_;
    BranchCut cut_;
    TrajectoryArc sigma_hat_;
    std::vector<Complex> phi_hat_;
    Polyline loop_;
};

Complex phi(const QuadraticDifferential& qd, const tracer::CriticalGraph& graph, Complex z);

}  // namespace varjac::quaddiff
