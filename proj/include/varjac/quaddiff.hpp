#pragma once

#include <array>
#include <span>
#include <vector>

#include "varjac/arc.hpp"
#include "varjac/common.hpp"
#include "varjac/error.hpp"
#include "varjac/numerics/quadrature.hpp"

namespace varjac::quaddiff {

struct ParameterPair {
    Complex A;
    double B = 1.0;
    bool normalized = false;
};

enum class AtomicMap { Conjugate, Moebius };

// Maps applied in list order take the normalized problem back to the user's
// original one (both parameters and points).
struct SymmetryTransform {
    std::vector<AtomicMap> maps;

    bool identity() const { return maps.empty(); }
    ParameterPair apply(const ParameterPair& p) const;
    Complex apply(Complex z) const;
};

Complex apply_map(AtomicMap m, Complex z);
ParameterPair apply_map(AtomicMap m, const ParameterPair& p);
const char* to_string(AtomicMap m);

struct Normalization {
    ParameterPair params;
    SymmetryTransform transform;
};

Normalization normalize(Complex A, double B);

// The A, B real fixture (e.g. A = B = 1). Not a supported input of the
// pipeline proper, only a sanity limit with a known graph.
ParameterPair real_limit(double A, double B);
bool is_real_limit(const ParameterPair& p);

// sqrt((A+1)(B+1)(A+B+1)) on C \ (-inf,-1], positive for real A > 1.
Complex discriminant_root(Complex A, double B);

enum class Zero { Minus, Plus };

class QuadraticDifferential {
public:
    static QuadraticDifferential build(const ParameterPair& params);

    const ParameterPair& params() const { return params_; }
    // R(z) = c2 z^2 + c1 z + c0
    const std::array<Complex, 3>& r_coeffs() const { return coeffs_; }
    Complex zeta_minus() const { return zm_; }
    Complex zeta_plus() const { return zp_; }
    Complex zero(Zero which) const { return which == Zero::Minus ? zm_ : zp_; }
    Complex residue_at_plus1() const { return params_.A; }
    Complex residue_at_minus1() const { return params_.B; }
    Complex residue_at_inf() const { return params_.A + params_.B + 2.0; }

    // Horner form (used for the polynomial identities).
    Complex R_poly(Complex z) const { return (coeffs_[0] * z + coeffs_[1]) * z + coeffs_[2]; }
    // Factored form; accurate next to the zeros.
    Complex R(Complex z) const { return coeffs_[0] * (z - zm_) * (z - zp_); }
    Complex dR(Complex z) const { return 2.0 * coeffs_[0] * z + coeffs_[1]; }

    // Leading coefficient c of the local model (c (z - z0) + ...) dz^2 at a zero.
    Complex local_coefficient(Zero which) const;

    double distance_to_zeros(Complex z) const { return std::min(std::abs(z - zm_), std::abs(z - zp_)); }
    double distance_to_poles(Complex z) const { return std::min(std::abs(z - 1.0), std::abs(z + 1.0)); }

    // Square root of R at z continued from (z_ref, w_ref); valid while
    // |z - z_ref| stays below about half the distance from z_ref to the zeros.
    Complex continue_from(Complex z_ref, Complex w_ref, Complex z) const
    {
        return w_ref * std::sqrt(R(z) / R(z_ref));
    }

private:
    ParameterPair params_;
    std::array<Complex, 3> coeffs_{};
    Complex zm_, zp_;
};

struct BranchState {
    Complex z;
    Complex w;
};

// Fraction of the distance to the nearest zero allowed per continuation step.
inline constexpr double kContinuationFraction = 0.4;

// Continue w along the polyline, inserting intermediate vertices so every step
// is short relative to the distance to the zeros. Returns the refined states.
std::vector<BranchState> continue_sqrt(const QuadraticDifferential& qd, std::span<const Complex> path, Complex w0);

// Integral of f(t, w(t)) dt over a sequence of branch states. Consecutive
// states must be close in the sense of continue_sqrt, except that a state with
// w == 0 marks a zero of R: the adjacent piece is then integrated with the
// substitution t = zeta + (b - zeta) u^2, absorbing the square-root behaviour.
template <class F>
Complex integrate_branch(const QuadraticDifferential& qd, std::span<const BranchState> states, F&& f,
                         const numerics::QuadratureSpec& spec = {})
{
    Complex total{};
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
        const BranchState& a = states[k];
        const BranchState& b = states[k + 1];
        if (a.z == b.z) continue;
        if (a.w == 0.0 && b.w == 0.0)
            throw Error(ErrorCode::InvalidArgument, "quaddiff", "piece joins two zeros of R");
        if (a.w == 0.0 || b.w == 0.0) {
            const BranchState& zr = (a.w == 0.0) ? a : b;  // the zero
            const BranchState& ref = (a.w == 0.0) ? b : a;
            const Complex d = ref.z - zr.z;
            auto g = [&](double u) -> Complex {
                const Complex t = zr.z + d * (u * u);
                const Complex w = (u == 0.0) ? Complex{} : qd.continue_from(ref.z, ref.w, t);
                return f(t, w) * (2.0 * u);
            };
            const Complex piece = d * numerics::integrate_interval(g, 0.0, 1.0, spec);
            total += (a.w == 0.0) ? piece : -piece;
        } else {
            const Complex d = b.z - a.z;
            auto g = [&](double s) -> Complex {
                const Complex t = a.z + s * d;
                return f(t, qd.continue_from(a.z, a.w, t));
            };
            total += d * numerics::integrate_interval(g, 0.0, 1.0, spec);
        }
    }
    return total;
}

// Branch states of a traced arc (points with companion w values).
std::vector<BranchState> arc_states(const TrajectoryArc& arc);

// Closed integral of w/(t^2-1) along the cycle (closed automatically).
Complex period(const QuadraticDifferential& qd, std::span<const Complex> cycle, Complex w0,
               const numerics::QuadratureSpec& spec = {});

// Integral of w/(t^2-1) along an arc using its own branch values.
Complex arc_integral(const QuadraticDifferential& qd, const TrajectoryArc& arc,
                     const numerics::QuadratureSpec& spec = {});

// The single-valued branch of sqrt(R) on C minus the short trajectory,
// normalised by w(z)/z -> A+B+2 at infinity.
class BranchCut {
public:
    BranchCut(const QuadraticDifferential& qd, const TrajectoryArc& gamma);

    const QuadraticDifferential& qd() const { return qd_; }
    const ArcCurve& curve() const { return curve_; }
    const Polyline& dense() const { return dense_; }

    double distance(Complex z) const;
    bool crosses(Complex a, Complex b) const;

    // Value of the global branch; throws OnCutEvaluation within 1e-10 of the cut.
    Complex value(Complex z) const;
    // ((z - zeta_+)/(z - zeta_-))^(1/4), equal to 1 at infinity, continued off the cut.
    Complex quartic_ratio(Complex z) const;

    // A far-field ray direction from z that does not meet the cut.
    Complex clear_direction(Complex z) const;
    // Polyline from a to b avoiding the cut (via the far field if needed).
    Polyline clear_path(Complex a, Complex b) const;

private:
    struct RayWalk {
        std::vector<BranchState> states;  // from the far anchor to z
    };
    RayWalk walk_in(Complex z) const;

    QuadraticDifferential qd_;
    ArcCurve curve_;
    Polyline dense_;
    Complex center_;
};

inline constexpr double kAnchorRadius = 1e4;

Complex global_branch(const QuadraticDifferential& qd, const TrajectoryArc& gamma, Complex z);

}  // namespace varjac::quaddiff
