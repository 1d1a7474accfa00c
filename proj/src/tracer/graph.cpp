#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "varjac/numerics/geometry.hpp"
#include "varjac/tracer.hpp"

namespace varjac::tracer {

namespace {

const char* kModule = "tracer";

[[noreturn]] void mismatch(const std::string& what)
{
    throw Error(ErrorCode::GraphMismatch, kModule, "critical graph structure mismatch: " + what);
}

std::array<TrajectoryArc, 3> trace_prongs(const QuadraticDifferential& qd, Zero zero, const TraceOptions& opts,
                                          bool parallel)
{
    const auto dirs = initial_directions(qd, zero);
    std::array<TrajectoryArc, 3> out;
    if (parallel) {
        std::array<std::future<TrajectoryArc>, 3> fut;
        for (int k = 0; k < 3; ++k)
            fut[k] = std::async(std::launch::async, [&, k] { return trace_from_zero(qd, zero, dirs[k], opts); });
        for (int k = 0; k < 3; ++k) out[k] = fut[k].get();
    } else {
        for (int k = 0; k < 3; ++k) out[k] = trace_from_zero(qd, zero, dirs[k], opts);
    }
    return out;
}

std::string tags(const std::array<TrajectoryArc, 3>& arcs)
{
    std::ostringstream os;
    for (const auto& a : arcs) os << to_string(a.end) << ' ';
    return os.str();
}

TrajectoryArc reversed(const TrajectoryArc& a, StartTag new_start, EndTag new_end)
{
    TrajectoryArc r = a;
    std::reverse(r.points.begin(), r.points.end());
    std::reverse(r.w_values.begin(), r.w_values.end());
    r.start = new_start;
    r.start_point = r.points.front();
    r.end = new_end;
    return r;
}

// Bounding boxes of consecutive chunks of a polyline, for cheap culling.
struct ChunkBoxes {
    static constexpr std::size_t kChunk = 32;
    std::vector<std::array<double, 4>> box;

    explicit ChunkBoxes(const Polyline& p)
    {
        for (std::size_t s = 0; s + 1 < p.size(); s += kChunk) {
            std::array<double, 4> b{1e300, -1e300, 1e300, -1e300};
            for (std::size_t k = s; k <= std::min(s + kChunk, p.size() - 1); ++k) {
                b[0] = std::min(b[0], p[k].real());
                b[1] = std::max(b[1], p[k].real());
                b[2] = std::min(b[2], p[k].imag());
                b[3] = std::max(b[3], p[k].imag());
            }
            box.push_back(b);
        }
    }
};

bool boxes_overlap(const std::array<double, 4>& a, const std::array<double, 4>& b)
{
    return !(a[1] < b[0] || b[1] < a[0] || a[3] < b[2] || b[3] < a[2]);
}

// Do the arcs meet anywhere except within `skip` of the listed shared points?
bool arcs_intersect(const Polyline& a, const Polyline& b, std::span<const Complex> shared, double skip)
{
    const ChunkBoxes ba(a), bb(b);
    auto near_shared = [&](Complex p) {
        for (Complex s : shared)
            if (std::abs(p - s) < skip) return true;
        return false;
    };
    for (std::size_t i = 0; i < ba.box.size(); ++i)
        for (std::size_t j = 0; j < bb.box.size(); ++j) {
            if (!boxes_overlap(ba.box[i], bb.box[j])) continue;
            const std::size_t ia = i * ChunkBoxes::kChunk, ja = j * ChunkBoxes::kChunk;
            for (std::size_t p = ia; p < std::min(ia + ChunkBoxes::kChunk, a.size() - 1); ++p)
                for (std::size_t q = ja; q < std::min(ja + ChunkBoxes::kChunk, b.size() - 1); ++q) {
                    if (auto hit = numerics::segment_intersection(a[p], a[p + 1], b[q], b[q + 1])) {
                        const Complex x = a[p] + hit->first * (a[p + 1] - a[p]);
                        if (!near_shared(x)) return true;
                    }
                }
        }
    return false;
}

double distance_to_arcs(Complex z, const std::vector<const Polyline*>& arcs)
{
    double d = 1e300;
    for (const Polyline* p : arcs) d = std::min(d, numerics::distance_to_polyline(z, *p));
    return d;
}

void collect_samples(const QuadraticDifferential& qd, CriticalGraph& g)
{
    const Polyline loop = closed_polyline(g.sigma_minus);
    std::vector<const Polyline*> arcs{&g.gamma.points, &g.sigma_minus.points, &g.sigma_plus.points};
    if (g.sigma_inf) arcs.push_back(&g.sigma_inf->points);

    // circle domain: points between -1 and the loop
    const std::size_t m = loop.size();
    for (int j = 0; j < 12; ++j) {
        const Complex p = loop[(j * m) / 12];
        for (double f : {0.35, 0.7}) {
            const Complex z = -1.0 + f * (p + 1.0);
            if (std::abs(z + 1.0) < 0.02 || numerics::distance_to_polyline(z, loop) < 0.01) continue;
            if (numerics::winding_number(loop, z) != 0) g.circle_domain_samples.push_back(z);
        }
    }
    // strip domain: a coarse grid outside the loop, away from every arc
    for (int ix = 0; ix <= 24; ++ix)
        for (int iy = 0; iy <= 20; ++iy) {
            const Complex z(-2.5 + 0.25 * ix + 0.0123, -2.5 + 0.25 * iy + 0.0071);
            if (qd.distance_to_poles(z) < 0.05 || qd.distance_to_zeros(z) < 0.05) continue;
            if (distance_to_arcs(z, arcs) < 0.05) continue;
            if (numerics::winding_number(loop, z) != 0) continue;
            if (g.shape == GraphShape::RealLimit &&
                numerics::winding_number(closed_polyline(g.sigma_plus), z) != 0)
                continue;
            g.strip_domain_samples.push_back(z);
        }
}

void check_samples(const QuadraticDifferential& qd, const CriticalGraph& g, const TraceOptions& opts)
{
    auto through = [&](Complex z, double sign) {
        const Complex w = std::sqrt(qd.R(z));
        const Complex d = kI * std::conj(w / (z * z - 1.0));
        return trace(qd, z, w, sign * d, opts);
    };
    if (!g.circle_domain_samples.empty()) {
        const Complex z = g.circle_domain_samples.front();
        const auto a = through(z, 1.0);
        if (a.end != EndTag::ClosedLoop) mismatch("circle-domain trajectory did not close");
        if (std::abs(numerics::winding_number(closed_polyline(a), -1.0)) != 1)
            mismatch("circle-domain trajectory does not wind once around -1");
    }
    if (g.shape == GraphShape::ComplexParameters && !g.strip_domain_samples.empty()) {
        const auto& s = g.strip_domain_samples;
        for (Complex z : {s.front(), s[s.size() / 2]}) {
            const auto a = through(z, 1.0), b = through(z, -1.0);
            const bool ok = (a.end == EndTag::PolePlus1 && b.end == EndTag::Infinity) ||
                            (a.end == EndTag::Infinity && b.end == EndTag::PolePlus1);
            if (!ok) mismatch(std::string("strip-domain trajectory ends at ") + to_string(a.end) + " / " + to_string(b.end));
        }
    }
}

}  // namespace

TrajectoryArc short_trajectory(const QuadraticDifferential& qd, const TraceOptions& opts)
{
    for (Zero z : {Zero::Minus, Zero::Plus}) {
        const auto dirs = initial_directions(qd, z);
        for (Complex d : dirs) {
            TrajectoryArc a = trace_from_zero(qd, z, d, opts);
            if (z == Zero::Minus && a.end == EndTag::ZetaPlus) return a;
            if (z == Zero::Plus && a.end == EndTag::ZetaMinus)
                return reversed(a, StartTag::ZetaMinus, EndTag::ZetaPlus);
        }
    }
    throw Error(ErrorCode::ShortTrajectoryNotFound, kModule, "short trajectory not found");
}

CriticalGraph build_critical_graph(const QuadraticDifferential& qd, const GraphOptions& opts)
{
    CriticalGraph g;
    g.shape = quaddiff::is_real_limit(qd.params()) ? GraphShape::RealLimit : GraphShape::ComplexParameters;

    std::array<TrajectoryArc, 3> from_minus, from_plus;
    if (opts.parallel) {
        auto fm = std::async(std::launch::async, [&] { return trace_prongs(qd, Zero::Minus, opts.trace, true); });
        from_plus = trace_prongs(qd, Zero::Plus, opts.trace, true);
        from_minus = fm.get();
    } else {
        from_minus = trace_prongs(qd, Zero::Minus, opts.trace, false);
        from_plus = trace_prongs(qd, Zero::Plus, opts.trace, false);
    }

    auto count = [](const std::array<TrajectoryArc, 3>& arcs, EndTag t) {
        return std::count_if(arcs.begin(), arcs.end(), [t](const TrajectoryArc& a) { return a.end == t; });
    };
    auto pick = [](const std::array<TrajectoryArc, 3>& arcs, EndTag t) -> const TrajectoryArc& {
        return *std::find_if(arcs.begin(), arcs.end(), [t](const TrajectoryArc& a) { return a.end == t; });
    };
    auto ccw_loop = [](const std::array<TrajectoryArc, 3>& arcs, Complex pole) -> const TrajectoryArc& {
        for (const auto& a : arcs)
            if (a.end == EndTag::ClosedLoop && numerics::winding_number(closed_polyline(a), pole) == 1) return a;
        mismatch("no loop winding once counterclockwise around the pole");
    };

    if (count(from_minus, EndTag::ZetaPlus) != 1 || count(from_minus, EndTag::ClosedLoop) != 2)
        mismatch("prongs at zeta_- end at " + tags(from_minus));
    g.gamma = pick(from_minus, EndTag::ZetaPlus);
    g.sigma_minus = ccw_loop(from_minus, -1.0);

    if (g.shape == GraphShape::ComplexParameters) {
        if (count(from_plus, EndTag::ZetaMinus) != 1 || count(from_plus, EndTag::PolePlus1) != 1 ||
            count(from_plus, EndTag::Infinity) != 1)
            mismatch("prongs at zeta_+ end at " + tags(from_plus));
        g.sigma_plus = pick(from_plus, EndTag::PolePlus1);
        g.sigma_inf = pick(from_plus, EndTag::Infinity);
    } else {
        if (count(from_plus, EndTag::ZetaMinus) != 1 || count(from_plus, EndTag::ClosedLoop) != 2)
            mismatch("prongs at zeta_+ end at " + tags(from_plus));
        g.sigma_plus = ccw_loop(from_plus, 1.0);
    }

    // the two traces of gamma must agree
    const auto& back = pick(from_plus, EndTag::ZetaMinus);
    const ArcCurve cg = ArcCurve::from_trajectory(g.gamma);
    double gap = 0.0;
    for (Complex p : back.points) gap = std::max(gap, cg.nearest(p).distance);
    if (gap > 1e-6) mismatch("the two traces of the short trajectory differ by " + std::to_string(gap));

    validate_graph(qd, g);
    collect_samples(qd, g);
    if (opts.check_samples) check_samples(qd, g, opts.trace);
    return g;
}

void validate_graph(const QuadraticDifferential& qd, const CriticalGraph& g)
{
    const Complex zm = qd.zeta_minus(), zp = qd.zeta_plus();
    if (g.gamma.points.front() != zm || g.gamma.points.back() != zp) mismatch("gamma endpoints are not the zeros");
    if (g.sigma_minus.end != EndTag::ClosedLoop) mismatch("sigma_- is not a closed loop");
    if (g.shape == GraphShape::ComplexParameters) {
        if (g.sigma_plus.end != EndTag::PolePlus1) mismatch("sigma_+ does not end at +1");
        if (g.sigma_inf && g.sigma_inf->end != EndTag::Infinity) mismatch("sigma_inf does not escape to infinity");
    } else if (g.sigma_plus.end != EndTag::ClosedLoop) {
        mismatch("real-limit arc at zeta_+ is not a closed loop");
    }

    const Polyline loop = closed_polyline(g.sigma_minus);
    if (numerics::winding_number(loop, -1.0) != 1) mismatch("sigma_- does not wind once around -1");
    if (numerics::winding_number(loop, 1.0) != 0) mismatch("sigma_- winds around +1");

    if (g.shape == GraphShape::ComplexParameters) {
        if (numerics::winding_number(loop, zp) != 0) mismatch("sigma_- winds around zeta_+");
        for (double x : numerics::real_axis_crossings(g.gamma.points))
            if (!(x > 1.0)) mismatch("gamma meets (-inf, 1] at x = " + std::to_string(x));
        if (!g.sigma_inf) mismatch("missing sigma_inf");
    } else {
        for (Complex p : g.gamma.points)
            if (std::abs(p.imag()) > 1e-9) mismatch("real-limit gamma leaves the real axis");
        if (numerics::winding_number(closed_polyline(g.sigma_plus), 1.0) != 1)
            mismatch("real-limit loop at zeta_+ does not wind around +1");
    }

    // arcs meet only at the zeros
    std::vector<const TrajectoryArc*> arcs{&g.gamma, &g.sigma_minus, &g.sigma_plus};
    if (g.sigma_inf) arcs.push_back(&*g.sigma_inf);
    const Complex shared[2] = {zm, zp};
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j)
            if (arcs_intersect(arcs[i]->points, arcs[j]->points, shared, 1e-4))
                mismatch("two critical arcs intersect away from the zeros");
}

}  // namespace varjac::tracer
