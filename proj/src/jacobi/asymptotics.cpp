#include <algorithm>
#include <cmath>

#include "varjac/error.hpp"
#include "varjac/jacobi.hpp"
#include "varjac/numerics/gauss_legendre.hpp"
#include "varjac/numerics/geometry.hpp"

namespace varjac::jacobi {

namespace {

const char* kModule = "jacobi";

constexpr double kMaxArgStep = 0.05;    // radians of arg(z -+ 1) per vertex step
constexpr double kMaxSegment = 0.05;    // length of a quadrature segment
constexpr int kMaxSplit = 30;

void check_contour(std::span<const Complex> F)
{
    auto bad = [](const char* w) { throw Error(ErrorCode::InvalidContour, kModule, std::string("invalid contour: ") + w); };
    if (F.size() < 3) bad("too few points");
    if (std::abs(F.front() + 1.0) > 1e-12 || std::abs(F.back() + 1.0) > 1e-12) bad("must start and end at -1");
    if (!(F[1].imag() > 0.0) || !(F[F.size() - 2].imag() < 0.0)) bad("must leave -1 upwards and return from below");
    const Polyline inner(F.begin() + 1, F.end() - 1);
    for (double x : numerics::real_axis_crossings(inner))
        if (!(x > 1.0)) bad("crosses (-inf, 1]");
    for (std::size_t k = 1; k + 1 < F.size(); ++k)
        if (std::abs(F[k] - 1.0) < 1e-12 || std::abs(F[k] + 1.0) < 1e-12) bad("passes through a pole");
}

// Vertices of F refined so that arg(z-1), arg(z+1) and position change slowly,
// with the continued arguments at every vertex.
struct ContinuedPath {
    Polyline v;
    std::vector<double> arg_m;  // arg(z - 1)
    std::vector<double> arg_p;  // arg(z + 1)
};

ContinuedPath continue_along(std::span<const Complex> F)
{
    ContinuedPath out;
    const std::size_t last = F.size() - 1;
    out.v.push_back(F[0]);
    for (std::size_t k = 0; k < last; ++k) {
        const Complex a = F[k], b = F[k + 1];
        const double dm = std::abs(std::arg((b - 1.0) / (a - 1.0)));
        // segments touching -1 keep a constant arg(z + 1)
        const double dp = (k == 0 || k + 1 == last) ? 0.0 : std::abs(std::arg((b + 1.0) / (a + 1.0)));
        const int pieces = std::max({1, static_cast<int>(std::ceil(std::max(dm, dp) / kMaxArgStep)),
                                     static_cast<int>(std::ceil(std::abs(b - a) / kMaxSegment))});
        for (int j = 1; j <= pieces; ++j) out.v.push_back(j == pieces ? b : a + (b - a) * (static_cast<double>(j) / pieces));
    }
    const std::size_t m = out.v.size();
    out.arg_m.resize(m);
    out.arg_p.resize(m);
    out.arg_m[0] = kPi;  // z - 1 = -2 + i0
    out.arg_p[0] = std::arg(out.v[1] + 1.0);
    for (std::size_t k = 1; k < m; ++k) {
        const Complex a = out.v[k - 1], b = out.v[k];
        const double step_m = std::arg((b - 1.0) / (a - 1.0));
        out.arg_m[k] = out.arg_m[k - 1] + step_m;
        if (k == 1 || k == m - 1) {
            out.arg_p[k] = out.arg_p[k - 1];
        } else {
            const double step_p = std::arg((b + 1.0) / (a + 1.0));
            if (std::abs(step_p) > 2.0 * kMaxArgStep || std::abs(step_m) > 2.0 * kMaxArgStep)
                throw Error(ErrorCode::ContinuationError, kModule, "continuation error");
            out.arg_p[k] = out.arg_p[k - 1] + step_p;
        }
    }
    return out;
}

// log of (t-1)^alpha (t+1)^beta on segment [a, b] of the continued path
struct SegmentWeight {
    Complex a, b;
    double arg_m, arg_p;
    bool first, last;
    Complex alpha, beta;

    // returns exp of the log weight; zero at t = -1
    Complex operator()(Complex t) const
    {
        const Complex tp = t + 1.0;
        if (std::abs(tp) == 0.0) return 0.0;
        const Complex lm(std::log(std::abs(t - 1.0)), arg_m + std::arg((t - 1.0) / (a - 1.0)));
        double ap = arg_p;
        if (!first && !last) ap += std::arg(tp / (a + 1.0));
        const Complex lp(std::log(std::abs(tp)), ap);
        return std::exp(alpha * lm + beta * lp);
    }
};

// Gauss-Legendre values of all moments on [a, b]
void segment_moments(const VaryingJacobiSpec& spec, const SegmentWeight& wgt, Complex a, Complex b, int order,
                     int k_max, std::vector<Complex>& acc, std::vector<double>& peak)
{
    const auto& rule = numerics::gauss_legendre(order);
    const Complex h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Complex t = c + h * rule.nodes[i];
        const Complex base = eval_stable(spec, t).value * wgt(t);
        Complex tk = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            const Complex f = base * tk;
            acc[k] += rule.weights[i] * h * f;
            peak[k] = std::max(peak[k], std::abs(f));
            tk *= t;
        }
    }
}

void adaptive_moments(const VaryingJacobiSpec& spec, const SegmentWeight& wgt, Complex a, Complex b, int k_max,
                      int depth, std::vector<Complex>& acc, std::vector<double>& peak)
{
    std::vector<Complex> lo(k_max + 1), hi(k_max + 1);
    std::vector<double> pk(k_max + 1, 0.0);
    segment_moments(spec, wgt, a, b, 20, k_max, lo, pk);
    segment_moments(spec, wgt, a, b, 32, k_max, hi, pk);
    bool ok = true;
    for (int k = 0; k <= k_max && ok; ++k)
        ok = std::abs(hi[k] - lo[k]) <= 1e-14 * pk[k] * std::abs(b - a) + 1e-300;
    if (ok || depth >= kMaxSplit) {
        if (!ok && depth >= kMaxSplit) throw Error(ErrorCode::QuadratureFailure, kModule, "quadrature failure");
        for (int k = 0; k <= k_max; ++k) {
            acc[k] += hi[k];
            peak[k] = std::max(peak[k], pk[k]);
        }
        return;
    }
    const Complex m = 0.5 * (a + b);
    adaptive_moments(spec, wgt, a, m, k_max, depth + 1, acc, peak);
    adaptive_moments(spec, wgt, m, b, k_max, depth + 1, acc, peak);
}

}  // namespace

std::vector<MomentResult> orthogonality_moments(const VaryingJacobiSpec& spec, std::span<const Complex> F,
                                                int k_max)
{
    if (k_max < 0) throw Error(ErrorCode::InvalidArgument, kModule, "moment index must be >= 0");
    check_contour(F);
    const ContinuedPath path = continue_along(F);
    const std::size_t m = path.v.size();

    std::vector<Complex> acc(k_max + 1);
    std::vector<double> peak(k_max + 1, 0.0);
    double length = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) {
        SegmentWeight w{path.v[k], path.v[k + 1], path.arg_m[k], path.arg_p[k], k == 0, k + 2 == m,
                        spec.alpha(), spec.beta()};
        adaptive_moments(spec, w, path.v[k], path.v[k + 1], k_max, 0, acc, peak);
        length += std::abs(path.v[k + 1] - path.v[k]);
    }
    std::vector<MomentResult> out(k_max + 1);
    for (int k = 0; k <= k_max; ++k) out[k] = {acc[k], peak[k] * length};
    return out;
}

MomentResult orthogonality_residual(const VaryingJacobiSpec& spec, std::span<const Complex> F, int k)
{
    if (k < 0) throw Error(ErrorCode::InvalidArgument, kModule, "moment index must be >= 0");
    return orthogonality_moments(spec, F, k)[k];
}

// ---------------------------------------------------------------------------

Complex log_g_difference(const quaddiff::BranchCut& cut, Complex z1, Complex z2)
{
    const auto& qd = cut.qd();
    const Complex A = qd.params().A;
    const double B = qd.params().B;
    const Polyline path = cut.clear_path(z2, z1);
    const auto states = quaddiff::continue_sqrt(qd, path, cut.value(z2));
    // the continued branch must land on the global one, otherwise the path met gamma
    const Complex w_end = states.back().w, w_ref = cut.value(z1);
    if (std::abs(w_end - w_ref) > 1e-8 * std::max(1.0, std::abs(w_ref)))
        throw Error(ErrorCode::InvalidEvaluationPath, kModule, "invalid evaluation path");
    numerics::QuadratureSpec spec;
    spec.tolerance = 1e-13;
    const Complex integral = quaddiff::integrate_branch(
        qd, states,
        [&](Complex t, Complex w) { return 0.5 * (A / (t - 1.0) + B / (t + 1.0) + w / (1.0 - t * t)); }, spec);
    return -integral;
}

StrongRatio strong_ratio_check(const VaryingJacobiSpec& spec, const quaddiff::BranchCut& cut, Complex z1,
                               Complex z2)
{
    const auto& qd = cut.qd();
    for (Complex z : {z1, z2})
        if (cut.distance(z) <= 0.3 || qd.distance_to_zeros(z) <= 0.3)
            throw Error(ErrorCode::InvalidArgument, kModule, "evaluation points must stay 0.3 away from gamma");

    StrongRatio r;
    r.actual = std::exp(log_eval_stable(spec, z1) - log_eval_stable(spec, z2));
    const Complex a1 = cut.quartic_ratio(z1), a2 = cut.quartic_ratio(z2);
    const Complex lg = log_g_difference(cut, z1, z2);
    r.predicted = (a1 + 1.0 / a1) / (a2 + 1.0 / a2) * std::exp(static_cast<double>(spec.n) * lg);
    r.rel_err = std::abs(r.actual / r.predicted - 1.0);
    return r;
}

StrongRatio strong_ratio_check(const VaryingJacobiSpec& spec, const QuadraticDifferential& qd,
                               const TrajectoryArc& gamma, Complex z1, Complex z2)
{
    return strong_ratio_check(spec, quaddiff::BranchCut(qd, gamma), z1, z2);
}

}  // namespace varjac::jacobi
