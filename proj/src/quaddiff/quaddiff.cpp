#include "varjac/quaddiff.hpp"

#include <cmath>
#include <limits>

#include "varjac/numerics/geometry.hpp"

namespace varjac::quaddiff {

namespace {
const char* kModule = "quaddiff";
}

const char* to_string(AtomicMap m) { return m == AtomicMap::Conjugate ? "conjugate" : "moebius"; }

Complex apply_map(AtomicMap m, Complex z)
{
    if (m == AtomicMap::Conjugate) return std::conj(z);
    return (z + 3.0) / (z - 1.0);
}

ParameterPair apply_map(AtomicMap m, const ParameterPair& p)
{
    ParameterPair q = p;
    q.A = (m == AtomicMap::Conjugate) ? std::conj(p.A) : -p.A - p.B - 2.0;
    q.normalized = false;
    return q;
}

ParameterPair SymmetryTransform::apply(const ParameterPair& p) const
{
    ParameterPair q = p;
    for (AtomicMap m : maps) q = apply_map(m, q);
    if (!maps.empty()) q.normalized = false;
    return q;
}

Complex SymmetryTransform::apply(Complex z) const
{
    for (AtomicMap m : maps) z = apply_map(m, z);
    return z;
}

Normalization normalize(Complex A, double B)
{
    if (!(B > 0.0) || !std::isfinite(B)) throw Error(ErrorCode::ParametersOutOfScope, kModule, "parameters outside scope: B must be > 0");
    if (!std::isfinite(A.real()) || !std::isfinite(A.imag()) || std::abs(A.imag()) < 1e-12)
        throw Error(ErrorCode::ParametersOutOfScope, kModule, "parameters outside scope: A must have nonzero imaginary part");

    ParameterPair p{A, B, false};
    std::vector<AtomicMap> applied;
    const double edge = -1.0 - B / 2.0;
    if (p.A.real() == edge)
        throw Error(ErrorCode::ParametersOutOfScope, kModule, "parameters outside scope: Re A = -1 - B/2 is fixed by the Moebius map");
    if (p.A.real() < edge) {
        p = apply_map(AtomicMap::Moebius, p);
        applied.push_back(AtomicMap::Moebius);
    }
    if (p.A.imag() < 0.0) {
        p = apply_map(AtomicMap::Conjugate, p);
        applied.push_back(AtomicMap::Conjugate);
    }
    p.normalized = true;
    // every atomic map is an involution, so undoing means replaying in reverse
    SymmetryTransform t{{applied.rbegin(), applied.rend()}};
    return {p, t};
}

ParameterPair real_limit(double A, double B)
{
    if (!(B > 0.0) || !(A > -1.0))
        throw Error(ErrorCode::ParametersOutOfScope, kModule, "real fixture needs A > -1, B > 0");
    return {Complex(A, 0.0), B, false};
}

bool is_real_limit(const ParameterPair& p) { return p.A.imag() == 0.0 && p.A.real() > -1.0 && p.B > 0.0; }

Complex discriminant_root(Complex A, double B)
{
    return std::sqrt(B + 1.0) * std::sqrt(A + 1.0) * std::sqrt(A + B + 1.0);
}

QuadraticDifferential QuadraticDifferential::build(const ParameterPair& params)
{
    if (!params.normalized && !is_real_limit(params))
        throw Error(ErrorCode::ParametersOutOfScope, kModule, "parameters outside scope: normalize first");
    if (!(params.B > 0.0)) throw Error(ErrorCode::ParametersOutOfScope, kModule, "parameters outside scope: B <= 0");

    QuadraticDifferential qd;
    qd.params_ = params;
    const Complex A = params.A;
    const double B = params.B;
    const Complex S = A + B + 2.0;
    qd.coeffs_ = {S * S, 2.0 * (A * A - B * B), (A - B) * (A - B) - 4.0 * (A + B + 1.0)};
    const Complex D = discriminant_root(A, B);
    qd.zp_ = (-A * A + B * B + 4.0 * D) / (S * S);
    qd.zm_ = (-A * A + B * B - 4.0 * D) / (S * S);
    return qd;
}

Complex QuadraticDifferential::local_coefficient(Zero which) const
{
    const Complex z0 = zero(which);
    const Complex q = z0 * z0 - 1.0;
    return -dR(z0) / (q * q);
}

std::vector<BranchState> continue_sqrt(const QuadraticDifferential& qd, std::span<const Complex> path, Complex w0)
{
    if (path.empty()) return {};
    if (std::abs(w0 * w0 - qd.R(path[0])) > 1e-8 * (1.0 + std::abs(qd.R(path[0]))))
        throw Error(ErrorCode::InvalidArgument, kModule, "w0 is not a square root of R at the path start");
    std::vector<BranchState> out;
    out.push_back({path[0], w0});
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const Complex b = path[k + 1];
        if (numerics::distance_to_segment(qd.zeta_minus(), path[k], b) <= 1e-8 ||
            numerics::distance_to_segment(qd.zeta_plus(), path[k], b) <= 1e-8)
            throw Error(ErrorCode::BranchPointOnPath, kModule, "branch point on path");
        Complex cur = path[k];
        Complex w = out.back().w;
        for (int guard = 0; cur != b; ++guard) {
            if (guard > 100000) throw Error(ErrorCode::BranchPointOnPath, kModule, "branch point on path");
            const double room = kContinuationFraction * qd.distance_to_zeros(cur);
            const double rest = std::abs(b - cur);
            const Complex next = rest <= room ? b : cur + (b - cur) * (room / rest);
            w = qd.continue_from(cur, w, next);
            cur = next;
            out.push_back({cur, w});
        }
    }
    return out;
}

std::vector<BranchState> arc_states(const TrajectoryArc& arc)
{
    std::vector<BranchState> s(arc.points.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = {arc.points[k], arc.w_values[k]};
    return s;
}

Complex period(const QuadraticDifferential& qd, std::span<const Complex> cycle, Complex w0,
               const numerics::QuadratureSpec& spec)
{
    spec.validate();
    if (cycle.size() < 3) throw Error(ErrorCode::InvalidArgument, kModule, "cycle needs at least 3 points");
    Polyline closed(cycle.begin(), cycle.end());
    if (closed.front() != closed.back()) closed.push_back(closed.front());
    for (Complex s : {qd.zeta_minus(), qd.zeta_plus(), Complex(1.0), Complex(-1.0)})
        if (numerics::distance_to_polyline(s, closed) <= 1e-6)
            throw Error(ErrorCode::InvalidArgument, kModule, "cycle passes too close to a critical point");
    // also refine against the poles so panels never straddle a near-singularity
    Polyline refined;
    refined.push_back(closed.front());
    for (std::size_t k = 0; k + 1 < closed.size(); ++k) {
        Complex cur = closed[k];
        const Complex b = closed[k + 1];
        while (cur != b) {
            const double room = 0.5 * qd.distance_to_poles(cur);
            const double rest = std::abs(b - cur);
            cur = rest <= room ? b : cur + (b - cur) * (room / rest);
            refined.push_back(cur);
        }
    }
    const auto states = continue_sqrt(qd, refined, w0);
    try {
        return integrate_branch(qd, states, [](Complex t, Complex w) { return w / (t * t - 1.0); }, spec);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::QuadratureFailure)
            throw Error(ErrorCode::QuadratureFailure, kModule, "period quadrature failure");
        throw;
    }
}

Complex arc_integral(const QuadraticDifferential& qd, const TrajectoryArc& arc, const numerics::QuadratureSpec& spec)
{
    const auto states = arc_states(arc);
    return integrate_branch(qd, states, [](Complex t, Complex w) { return w / (t * t - 1.0); }, spec);
}

// ---------------------------------------------------------------------------
// global branch

BranchCut::BranchCut(const QuadraticDifferential& qd, const TrajectoryArc& gamma)
    : qd_(qd), curve_(ArcCurve::from_trajectory(gamma))
{
    dense_ = curve_.dense(8);
    Complex c{};
    for (Complex p : dense_) c += p;
    center_ = c / static_cast<double>(dense_.size());
}

double BranchCut::distance(Complex z) const { return curve_.nearest(z).distance; }

bool BranchCut::crosses(Complex a, Complex b) const { return numerics::segment_crosses_polyline(a, b, dense_); }

namespace {

double segment_clearance(Complex a, Complex b, const Polyline& poly)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        const Complex c = poly[k], d = poly[k + 1];
        if (numerics::segment_intersection(a, b, c, d)) return 0.0;
        best = std::min({best, numerics::distance_to_segment(c, a, b), numerics::distance_to_segment(d, a, b),
                         numerics::distance_to_segment(a, c, d)});
    }
    return best;
}

}  // namespace

Complex BranchCut::clear_direction(Complex z) const
{
    const double dz = numerics::distance_to_polyline(z, dense_);
    const double want = std::min(1e-3, 0.5 * dz);
    Complex d = z - center_;
    if (std::abs(d) > 0.0) {
        d /= std::abs(d);
        if (segment_clearance(z + 1e-12 * d, z + kAnchorRadius * d, dense_) >= want) return d;
    }
    Complex best_dir{};
    double best = -1.0;
    for (int j = 0; j < 72; ++j) {
        const Complex e = std::polar(1.0, 2.0 * kPi * j / 72.0 + 0.013);
        const double c = segment_clearance(z, z + kAnchorRadius * e, dense_);
        if (c > best) { best = c; best_dir = e; }
    }
    if (best <= 0.0) throw Error(ErrorCode::OnCutEvaluation, kModule, "no clear ray to the far field");
    return best_dir;
}

BranchCut::RayWalk BranchCut::walk_in(Complex z) const
{
    if (distance(z) < 1e-10) throw Error(ErrorCode::OnCutEvaluation, kModule, "on-cut evaluation");
    const Complex d = clear_direction(z);
    const Complex far = z + kAnchorRadius * d;
    const Complex S = qd_.params().A + qd_.params().B + 2.0;
    const Complex w_far = S * far * std::sqrt((1.0 - qd_.zeta_plus() / far) * (1.0 - qd_.zeta_minus() / far));
    const Complex seg[2] = {far, z};
    return {continue_sqrt(qd_, seg, w_far)};
}

Complex BranchCut::value(Complex z) const { return walk_in(z).states.back().w; }

Complex BranchCut::quartic_ratio(Complex z) const
{
    const auto walk = walk_in(z);
    const Complex zp = qd_.zeta_plus(), zm = qd_.zeta_minus();
    auto ratio = [&](Complex t) { return (t - zp) / (t - zm); };
    Complex L = std::log(ratio(walk.states.front().z));
    for (std::size_t k = 0; k + 1 < walk.states.size(); ++k)
        L += std::log(ratio(walk.states[k + 1].z) / ratio(walk.states[k].z));
    return std::exp(0.25 * L);
}

Polyline BranchCut::clear_path(Complex a, Complex b) const
{
    if (!crosses(a, b) && numerics::distance_to_segment(qd_.zeta_minus(), a, b) > 1e-3 &&
        numerics::distance_to_segment(qd_.zeta_plus(), a, b) > 1e-3)
        return {a, b};
    // Leave along clear rays to a circle enclosing the cut, walk around it.
    double radius = 0.0;
    for (Complex p : dense_) radius = std::max(radius, std::abs(p - center_));
    radius = 2.0 * radius + 2.0 + std::max(std::abs(a - center_), std::abs(b - center_));
    const Complex da = clear_direction(a), db = clear_direction(b);
    // the point where each ray exits the circle |t - center| = radius
    auto exit_point = [&](Complex p, Complex d) {
        const Complex q = p - center_;
        const double bq = (q * std::conj(d)).real();
        const double s = -bq + std::sqrt(bq * bq - std::norm(q) + radius * radius);
        return p + s * d;
    };
    const Complex pa = exit_point(a, da), pb = exit_point(b, db);
    double ta = std::arg(pa - center_), tb = std::arg(pb - center_);
    double dt = tb - ta;
    while (dt > kPi) dt -= 2.0 * kPi;
    while (dt < -kPi) dt += 2.0 * kPi;
    Polyline path{a, pa};
    const int steps = std::max(2, static_cast<int>(std::ceil(std::abs(dt) / 0.05)));
    for (int j = 1; j < steps; ++j) path.push_back(center_ + std::polar(radius, ta + dt * j / steps));
    path.push_back(pb);
    path.push_back(b);
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        if (crosses(path[k], path[k + 1]))
            throw Error(ErrorCode::InvalidEvaluationPath, kModule, "invalid evaluation path");
    return path;
}

Complex global_branch(const QuadraticDifferential& qd, const TrajectoryArc& gamma, Complex z)
{
    return BranchCut(qd, gamma).value(z);
}

}  // namespace varjac::quaddiff
