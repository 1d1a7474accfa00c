#include <cmath>
#include <deque>
#include <limits>

#include "varjac/numerics/geometry.hpp"
#include "varjac/numerics/ode.hpp"
#include "varjac/tracer.hpp"

namespace varjac::tracer {

namespace {

const char* kModule = "tracer";

// Integral of w/(t^2-1) over the chord [a, b], w continued from (a, wa).
Complex chord_integral(const QuadraticDifferential& qd, Complex a, Complex wa, Complex b)
{
    const Complex d = b - a;
    auto g = [&](double s) -> Complex {
        const Complex t = a + s * d;
        return qd.continue_from(a, wa, t) / (t * t - 1.0);
    };
    return d * numerics::gauss_fixed(g, 0.0, 1.0, 10);
}

// Integral of w/(t^2-1) from the zero zr to z (branch fixed by (z, w)).
Complex from_zero_integral(const QuadraticDifferential& qd, Complex zr, Complex z, Complex w)
{
    const Complex d = z - zr;
    auto g = [&](double u) -> Complex {
        const Complex t = zr + d * (u * u);
        return qd.continue_from(z, w, t) / (t * t - 1.0) * (2.0 * u);
    };
    return d * numerics::gauss_fixed(g, 0.0, 1.0, 16);
}

double invariant(Complex phi, bool vertical) { return vertical ? phi.imag() : phi.real(); }

Complex correction_direction(Complex v, bool vertical)
{
    const Complex c = std::conj(v) / std::norm(v);
    return vertical ? kI * c : c;
}

Complex field_direction(Complex v, bool vertical)
{
    const Complex c = std::conj(v) / std::abs(v);
    return vertical ? c : kI * c;
}

struct Seed {
    Polyline points;
    std::vector<Complex> w;
    Complex phi;  // primitive at the last seed point, relative to the arc start
    StartTag start;
    std::optional<Zero> origin;
};

TrajectoryArc run(const QuadraticDifferential& qd, Seed seed, const TraceOptions& opts)
{
    const bool vertical = opts.vertical;
    const double level = 0.0;

    TrajectoryArc arc;
    arc.start = seed.start;
    arc.start_point = seed.points.front();
    arc.vertical = vertical;
    arc.points = std::move(seed.points);
    arc.w_values = std::move(seed.w);

    Complex z = arc.points.back();
    Complex w = arc.w_values.back();
    Complex phi = seed.phi;
    const Complex start = arc.start_point;
    const Complex initial_heading = field_direction(w / (z * z - 1.0), vertical);

    const std::array<Complex, 2> zeros{qd.zeta_minus(), qd.zeta_plus()};
    const std::array<EndTag, 2> zero_tags{EndTag::ZetaMinus, EndTag::ZetaPlus};
    bool departed_origin = !seed.origin.has_value();
    bool departed_start = false;
    std::optional<int> target;  // index into zeros

    numerics::DormandPrince dp(opts.abs_tol, opts.abs_tol);
    std::deque<double> d_plus, d_minus, d_inf;
    double h = seed.origin ? opts.start_offset : 1e-4;
    double scaled_length = 0.0;
    arc.arc_length = numerics::polyline_length(arc.points);

    auto finish = [&](Complex zf, Complex wf, EndTag tag, const Complex& dphi) {
        arc.points.push_back(zf);
        arc.w_values.push_back(wf);
        arc.arc_length += std::abs(zf - z);
        phi += dphi;
        arc.end = tag;
    };

    for (long step = 0;; ++step) {
        if (step > 2000000) throw Error(ErrorCode::NoTermination, kModule, "no termination (step budget)");
        const double scale = std::max(1.0, std::abs(z));
        const double cap = std::min({opts.max_step * scale, quaddiff::kContinuationFraction * qd.distance_to_zeros(z),
                                     quaddiff::kContinuationFraction * qd.distance_to_poles(z)});
        const Complex z0 = z, w0 = w;
        auto field = [&](Complex t) {
            const Complex wt = qd.continue_from(z0, w0, t);
            return field_direction(wt / (t * t - 1.0), vertical);
        };
        numerics::StepResult sr;
        try {
            sr = dp.step(field, z, h, cap, 1e-15 * scale);
        } catch (const Error&) {
            throw Error(ErrorCode::TraceStalled, kModule, "trace stalled near z = (" + std::to_string(z.real()) +
                                                              ", " + std::to_string(z.imag()) + ")");
        }
        h = sr.h_next;

        // project the new point back onto the level set of the primitive
        Complex zn = sr.z, wn = w, dphi{};
        for (int it = 0; it < 3; ++it) {
            wn = qd.continue_from(z0, w0, zn);
            dphi = chord_integral(qd, z0, w0, zn);
            const double e = invariant(phi + dphi, vertical) - level;
            if (std::abs(e) <= 1e-15 * (1.0 + std::abs(phi))) break;
            zn -= e * correction_direction(wn / (zn * zn - 1.0), vertical);
        }

        if (opts.stop_on_chord && opts.stop_on_chord(z0, zn)) {
            finish(zn, wn, EndTag::Interrupted, dphi);
            break;
        }

        // closed loop back to a regular start point
        if (!seed.origin) {
            if (!departed_start && std::abs(zn - start) > 1e-3) departed_start = true;
            if (departed_start) {
                const Complex chord = zn - z0;
                const double d = numerics::distance_to_segment(start, z0, zn);
                if (d < 0.1 * std::abs(chord) + 1e-9 && (chord * std::conj(initial_heading)).real() > 0.0 &&
                    numerics::project_on_segment(start, z0, zn) < 1.0) {
                    const Complex ws = qd.continue_from(z0, w0, start);
                    finish(start, ws, EndTag::ClosedLoop, chord_integral(qd, z0, w0, start));
                    break;
                }
            }
        }

        arc.points.push_back(zn);
        arc.w_values.push_back(wn);
        arc.arc_length += std::abs(zn - z);
        scaled_length += std::abs(zn - z) / scale;
        phi += dphi;
        z = zn;
        w = wn;

        // arrival at a zero of R
        bool done = false;
        for (int j = 0; j < 2 && !done; ++j) {
            const double r = std::abs(z - zeros[j]);
            const bool is_origin = seed.origin && static_cast<int>(*seed.origin) == j;
            if (is_origin && !departed_origin) {
                if (r > 2.0 * opts.zero_switch) departed_origin = true;
                continue;
            }
            if (target && *target == j && r > 2.0 * opts.zero_switch) target.reset();
            if (r >= opts.zero_switch) continue;
            const Complex to_zero = -from_zero_integral(qd, zeros[j], z, w);
            if (!target) {
                const double mismatch = std::abs(invariant(phi + to_zero, vertical) - level);
                if (mismatch < 1e-8 * (1.0 + std::abs(phi))) target = j;
            }
            if (target && *target == j && r < opts.zero_snap) {
                const EndTag tag = is_origin ? EndTag::ClosedLoop : zero_tags[j];
                arc.points.push_back(zeros[j]);
                arc.w_values.push_back(Complex{});
                arc.arc_length += r;
                phi += to_zero;
                arc.end = tag;
                done = true;
            }
        }
        if (done) break;

        // double poles: spiral capture at +-1, escape to infinity
        auto push = [&](std::deque<double>& q, double v) {
            q.push_back(v);
            if (static_cast<int>(q.size()) > opts.monotone_window) q.pop_front();
        };
        auto monotone = [&](const std::deque<double>& q, bool decreasing) {
            if (static_cast<int>(q.size()) < opts.monotone_window) return false;
            for (std::size_t k = 1; k < q.size(); ++k)
                if (decreasing ? !(q[k] < q[k - 1]) : !(q[k] > q[k - 1])) return false;
            return true;
        };
        push(d_plus, std::abs(z - 1.0));
        push(d_minus, std::abs(z + 1.0));
        push(d_inf, std::abs(z));
        if (d_plus.back() < opts.pole_capture && monotone(d_plus, true)) { arc.end = EndTag::PolePlus1; break; }
        if (d_minus.back() < opts.pole_capture && monotone(d_minus, true)) { arc.end = EndTag::PoleMinus1; break; }
        if (d_inf.back() > opts.escape_radius && monotone(d_inf, false)) { arc.end = EndTag::Infinity; break; }
        if (scaled_length > opts.max_arc_length)
            throw Error(ErrorCode::NoTermination, kModule, "no termination (arc length budget exceeded)");
    }

    // independent check of conservation with adaptive quadrature on the final arc
    const auto prim = cumulative_primitive(qd, arc);
    double drift = 0.0;
    for (const Complex& p : prim) drift = std::max(drift, std::abs(invariant(p, vertical) - level));
    arc.phase_drift = drift;
    return arc;
}

}  // namespace

std::array<Complex, 3> initial_directions(const QuadraticDifferential& qd, Zero zero)
{
    const double a = std::arg(qd.local_coefficient(zero));
    std::array<Complex, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = std::polar(1.0, (-a + 2.0 * kPi * k) / 3.0);
    return out;
}

std::array<Complex, 3> vertical_directions(const QuadraticDifferential& qd, Zero zero)
{
    const double a = std::arg(qd.local_coefficient(zero));
    std::array<Complex, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = std::polar(1.0, (kPi - a + 2.0 * kPi * k) / 3.0);
    return out;
}

TrajectoryArc trace(const QuadraticDifferential& qd, Complex start, Complex w_start, Complex direction,
                    const TraceOptions& opts)
{
    if (qd.distance_to_zeros(start) < 1e-8 || qd.distance_to_poles(start) < 1e-8)
        throw Error(ErrorCode::InvalidArgument, kModule, "trace start is a critical point; use trace_from_zero");
    Complex w = w_start;
    if ((field_direction(w / (start * start - 1.0), opts.vertical) * std::conj(direction)).real() < 0.0) w = -w;
    Seed seed{{start}, {w}, Complex{}, StartTag::Regular, std::nullopt};
    return run(qd, std::move(seed), opts);
}

TrajectoryArc trace_from_zero(const QuadraticDifferential& qd, Zero zero, Complex direction,
                              const TraceOptions& opts)
{
    const Complex zr = qd.zero(zero);
    const Complex dir = direction / std::abs(direction);
    Complex z1 = zr + opts.start_offset * dir;
    Complex w1 = std::sqrt(qd.R(z1));
    if ((field_direction(w1 / (z1 * z1 - 1.0), opts.vertical) * std::conj(dir)).real() < 0.0) w1 = -w1;
    // put the first point on the zero's level set
    Complex phi1 = from_zero_integral(qd, zr, z1, w1);
    for (int it = 0; it < 3; ++it) {
        const double e = invariant(phi1, opts.vertical);
        if (std::abs(e) < 1e-17) break;
        const Complex zn = z1 - e * correction_direction(w1 / (z1 * z1 - 1.0), opts.vertical);
        w1 = qd.continue_from(z1, w1, zn);
        z1 = zn;
        phi1 = from_zero_integral(qd, zr, z1, w1);
    }
    Seed seed{{zr, z1}, {Complex{}, w1}, phi1, zero == Zero::Minus ? StartTag::ZetaMinus : StartTag::ZetaPlus,
              zero};
    return run(qd, std::move(seed), opts);
}

std::vector<Complex> cumulative_primitive(const QuadraticDifferential& qd, const TrajectoryArc& arc)
{
    std::vector<Complex> out(arc.points.size());
    numerics::QuadratureSpec spec;
    spec.tolerance = 1e-13;
    Complex acc{};
    for (std::size_t k = 0; k + 1 < arc.points.size(); ++k) {
        out[k] = acc;
        const quaddiff::BranchState s[2] = {{arc.points[k], arc.w_values[k]}, {arc.points[k + 1], arc.w_values[k + 1]}};
        acc += quaddiff::integrate_branch(qd, s, [](Complex t, Complex w) { return w / (t * t - 1.0); }, spec);
    }
    out.back() = acc;
    return out;
}

int winding_number(std::span<const Complex> closed, Complex p) { return numerics::winding_number(closed, p); }

Polyline closed_polyline(const TrajectoryArc& arc)
{
    Polyline p = arc.points;
    if (p.size() > 1 && std::abs(p.front() - p.back()) < 1e-7) p.pop_back();
    return p;
}

}  // namespace varjac::tracer
