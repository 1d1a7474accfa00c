#include <algorithm>
#include <cmath>
#include <sstream>

#include "varjac/error.hpp"
#include "varjac/jacobi.hpp"

namespace varjac::jacobi {

RootSet roots(const VaryingJacobiSpec& spec, const RootOptions& opts)
{
    const int n = spec.n;
    if (n < 1 || n > kMaxRootDegree)
        throw Error(ErrorCode::InvalidArgument, "jacobi", "degree must lie in [1, 200]");

    RootSet rs;
    rs.n = n;
    std::vector<Complex>& z = rs.roots;
    z.resize(n);
    for (int j = 0; j < n; ++j) z[j] = std::polar(opts.radius, 2.0 * kPi * j / n + opts.angle_offset);

    // Aberth-Ehrlich, updating in place (Gauss-Seidel order)
    bool converged = false;
    for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        rs.iterations = it + 1;
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            const Complex ratio = newton_ratio(spec, z[j]);
            if (ratio == 0.0) continue;
            if (!std::isfinite(std::abs(ratio))) {
                z[j] += 1e-8 * (1.0 + std::abs(z[j]));
                worst = 1.0;
                continue;
            }
            Complex repulsion{};
            for (int k = 0; k < n; ++k)
                if (k != j) repulsion += 1.0 / (z[j] - z[k]);
            const Complex w = ratio / (1.0 - ratio * repulsion);
            z[j] -= w;
            worst = std::max(worst, std::abs(w) / (1.0 + std::abs(z[j])));
        }
        converged = worst < opts.tolerance;
    }

    // Newton polish and residuals
    rs.residual = 0.0;
    for (auto& r : z) {
        for (int k = 0; k < 3; ++k) {
            const Complex step = newton_ratio(spec, r);
            if (!std::isfinite(std::abs(step))) break;
            r -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
        }
        rs.residual = std::max(rs.residual, std::abs(newton_ratio(spec, r)));
    }
    if (!(rs.residual < 1e-8)) {
        std::ostringstream os;
        os << "rootfinding failure after " << rs.iterations << " iterations, worst residual " << rs.residual;
        throw Error(ErrorCode::RootfindingFailure, "jacobi", os.str());
    }
    std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return rs;
}

measure::DiscretizedMeasure counting_measure(const RootSet& rs)
{
    measure::DiscretizedMeasure m;
    m.nodes = rs.roots;
    m.weights.assign(rs.roots.size(), 1.0 / static_cast<double>(rs.n));
    m.total_mass = 0.0;
    for (double w : m.weights) m.total_mass += w;
    return m;
}

}  // namespace varjac::jacobi
