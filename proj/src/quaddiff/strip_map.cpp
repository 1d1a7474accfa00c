#include "varjac/strip_map.hpp"

#include <cmath>

#include "varjac/numerics/geometry.hpp"

namespace varjac::quaddiff {

namespace {

const char* kModule = "quaddiff";

Complex chord(const QuadraticDifferential& qd, Complex a, Complex wa, Complex b)
{
    const BranchState s[2] = {{a, wa}, {b, qd.continue_from(a, wa, b)}};
    return integrate_branch(qd, s, [](Complex t, Complex w) { return w / (t * t - 1.0); });
}

}  // namespace

StripMap::StripMap(const QuadraticDifferential& qd, const tracer::CriticalGraph& graph)
    : qd_(qd), graph_(&graph), cut_(qd, graph.gamma), loop_(tracer::closed_polyline(graph.sigma_minus))
{
    if (graph.shape != tracer::GraphShape::ComplexParameters)
        throw Error(ErrorCode::NotInStripDomain, kModule, "strip map needs complex parameters");
    const Complex zp = qd.zeta_plus();
    // sigma_hat leaves zeta_+ opposite to sigma_+
    const Complex sp = graph.sigma_plus.points[1] - zp;
    Complex dir{};
    double best = -2.0;
    for (Complex d : tracer::vertical_directions(qd, Zero::Plus)) {
        const double c = -(d * std::conj(sp)).real() / std::abs(sp);
        if (c > best) { best = c; dir = d; }
    }
    std::vector<const Polyline*> arcs{&graph.gamma.points, &graph.sigma_minus.points, &graph.sigma_plus.points,
                                      &graph.sigma_inf->points};
    tracer::TraceOptions opts;
    opts.vertical = true;
    double first = 2.0;  // chord parameter of the first boundary crossing
    opts.stop_on_chord = [&](Complex a, Complex b) {
        if (std::abs(a - zp) < 1e-4 || std::abs(b - zp) < 1e-4) return false;
        first = 2.0;
        for (const Polyline* p : arcs)
            for (std::size_t k = 0; k + 1 < p->size(); ++k)
                if (auto x = numerics::segment_intersection(a, b, (*p)[k], (*p)[k + 1])) first = std::min(first, x->first);
        return first <= 1.0;
    };
    sigma_hat_ = tracer::trace_from_zero(qd, Zero::Plus, dir, opts);
    // cut the final chord at the boundary so sigma_hat stays inside the strip
    {
        const std::size_t m = sigma_hat_.points.size() - 1;
        const Complex a = sigma_hat_.points[m - 1], wa = sigma_hat_.w_values[m - 1];
        const Complex p = a + first * (sigma_hat_.points[m] - a);
        sigma_hat_.points[m] = p;
        sigma_hat_.w_values[m] = qd.continue_from(a, wa, p);
    }
    // match the companion branch with the global one
    const std::size_t probe = sigma_hat_.points.size() / 2;
    const Complex g = cut_.value(sigma_hat_.points[probe]);
    if (std::abs(g - sigma_hat_.w_values[probe]) > std::abs(g + sigma_hat_.w_values[probe]))
        for (Complex& w : sigma_hat_.w_values) w = -w;
    phi_hat_ = tracer::cumulative_primitive(qd, sigma_hat_);
}

bool StripMap::in_strip_domain(Complex z) const
{
    if (qd_.distance_to_poles(z) < 1e-9 || qd_.distance_to_zeros(z) < 1e-9) return false;
    for (const TrajectoryArc* a : {&graph_->gamma, &graph_->sigma_minus, &graph_->sigma_plus, &*graph_->sigma_inf})
        if (numerics::distance_to_polyline(z, a->points) < 1e-9) return false;
    return numerics::winding_number(loop_, z) == 0;
}

Complex StripMap::operator()(Complex z) const
{
    if (!in_strip_domain(z)) throw Error(ErrorCode::NotInStripDomain, kModule, "not in strip domain");
    const Complex wz = cut_.value(z);
    const Polyline& hat = sigma_hat_.points;

    struct Hit {
        std::size_t j = 0;
        Complex p;
    };
    std::optional<Hit> hit;
    tracer::TraceOptions opts;
    opts.stop_on_chord = [&](Complex a, Complex b) {
        for (std::size_t j = 0; j + 1 < hat.size(); ++j)
            if (auto x = numerics::segment_intersection(a, b, hat[j], hat[j + 1])) {
                hit = Hit{j, hat[j] + x->second * (hat[j + 1] - hat[j])};
                return true;
            }
        return false;
    };
    const Complex v = wz / (z * z - 1.0);
    for (double sign : {1.0, -1.0}) {
        hit.reset();
        TrajectoryArc arc;
        try {
            arc = tracer::trace(qd_, z, wz, sign * kI * std::conj(v), opts);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoTermination) continue;
            throw;
        }
        if (arc.end != EndTag::Interrupted || !hit) continue;
        // the tracer may have flipped w to match the heading; undo for the global branch
        const double s = std::abs(arc.w_values[0] - wz) < std::abs(arc.w_values[0] + wz) ? 1.0 : -1.0;
        for (Complex& w : arc.w_values) w *= s;
        // z -> ... -> last point before the crossing, then the partial chord to p
        const std::size_t m = arc.points.size() - 1;
        TrajectoryArc head = arc;
        head.points.resize(m);
        head.w_values.resize(m);
        Complex along{};
        if (m >= 2) along = tracer::cumulative_primitive(qd_, head).back();
        along += chord(qd_, head.points.back(), head.w_values.back(), hit->p);
        const Complex on_hat =
            phi_hat_[hit->j] + chord(qd_, hat[hit->j], sigma_hat_.w_values[hit->j], hit->p);
        return on_hat - along;
    }
    throw Error(ErrorCode::NotInStripDomain, kModule, "not in strip domain: trajectory never meets sigma_hat");
}

Complex phi(const QuadraticDifferential& qd, const tracer::CriticalGraph& graph, Complex z)
{
    return StripMap(qd, graph)(z);
}

}  // namespace varjac::quaddiff
