#pragma once

#include <span>
#include <vector>

#include "varjac/measure.hpp"
#include "varjac/quaddiff.hpp"

namespace varjac::jacobi {

using quaddiff::QuadraticDifferential;

// p_n = P_n^(alpha, beta) with alpha = n A, beta = n B.
struct VaryingJacobiSpec {
    int n = 0;
    Complex A{};
    double B = 0.0;

    static VaryingJacobiSpec make(int n, Complex A, double B);
    Complex alpha() const { return static_cast<double>(n) * A; }
    Complex beta() const { return static_cast<double>(n) * B; }
};

struct ValueDerivative {
    Complex value{};
    Complex derivative{};
};

// Three-term recurrence in the degree at fixed (alpha, beta), double precision.
ValueDerivative eval_recurrence(const VaryingJacobiSpec& spec, Complex z);

// Explicit binomial sum; small-n oracle (n <= 30).
Complex eval_explicit(const VaryingJacobiSpec& spec, Complex z);
inline constexpr int kExplicitMaxDegree = 30;

// Hypergeometric form C(n+alpha, n) 2F1(-n, n+alpha+beta+1; alpha+1; (1-z)/2)
// summed by Horner's rule in MPFR. The working precision is raised until the
// bits lost to cancellation (log2 of sum|terms| / |sum|) leave a 60-bit margin.
// Values can leave the double range for large n away from the roots; the two
// variants below avoid that.
ValueDerivative eval_stable(const VaryingJacobiSpec& spec, Complex z);
// log p_n(z), imaginary part modulo 2 pi.
Complex log_eval_stable(const VaryingJacobiSpec& spec, Complex z);
// Newton correction p_n(z) / p_n'(z).
Complex newton_ratio(const VaryingJacobiSpec& spec, Complex z);

// Working precision (bits) eval_stable settled on at z.
int stable_precision(const VaryingJacobiSpec& spec, Complex z);

struct RootSet {
    std::vector<Complex> roots;
    int n = 0;
    double residual = 0.0;  // max over roots of |p_n / p_n'|
    int iterations = 0;
};

struct RootOptions {
    int max_iterations = 500;
    double tolerance = 1e-14;  // relative Aberth correction at convergence
    double radius = 2.0;       // initial circle
    double angle_offset = 0.4;
};

inline constexpr int kMaxRootDegree = 200;

RootSet roots(const VaryingJacobiSpec& spec, const RootOptions& opts = {});

// Atoms of mass 1/n at the roots.
measure::DiscretizedMeasure counting_measure(const RootSet& rs);

struct MomentResult {
    Complex moment{};
    double scale = 0.0;  // max |integrand| on F times the length of F
    double relative() const { return scale > 0.0 ? std::abs(moment) / scale : 0.0; }
};

// Integral over F of p_n(z) z^k (z-1)^alpha (z+1)^beta dz. F runs from -1+i0
// to -1-i0; the powers are fixed at the start (arg(z-1) = pi, arg(z+1) along
// the first segment) and continued by accumulated argument.
MomentResult orthogonality_residual(const VaryingJacobiSpec& spec, std::span<const Complex> F, int k);

// All moments k = 0..k_max in one pass over F (same quadrature for every k).
std::vector<MomentResult> orthogonality_moments(const VaryingJacobiSpec& spec, std::span<const Complex> F,
                                                int k_max);

struct StrongRatio {
    Complex actual{};
    Complex predicted{};
    double rel_err = 0.0;
};

// Compares p_n(z1)/p_n(z2) with the leading term of the strong asymptotics,
// (a + 1/a)(z1) G(z1)^n / ((a + 1/a)(z2) G(z2)^n) with G = exp(-int Cauchy).
StrongRatio strong_ratio_check(const VaryingJacobiSpec& spec, const QuadraticDifferential& qd,
                               const TrajectoryArc& gamma, Complex z1, Complex z2);
StrongRatio strong_ratio_check(const VaryingJacobiSpec& spec, const quaddiff::BranchCut& cut, Complex z1,
                               Complex z2);

// log G(z1) - log G(z2) = -int_{z2}^{z1} Cauchy transform, along a path avoiding gamma.
Complex log_g_difference(const quaddiff::BranchCut& cut, Complex z1, Complex z2);

}  // namespace varjac::jacobi
