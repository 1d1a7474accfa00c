#include "varjac/numerics/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "varjac/error.hpp"

namespace varjac::numerics {

namespace {

GaussRule build_rule(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi's initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::vector<GaussRule> build_table()
{
    std::vector<GaussRule> t;
    t.reserve(kMaxGaussOrder + 1);
    t.emplace_back();
    for (int n = 1; n <= kMaxGaussOrder; ++n) t.push_back(build_rule(n));
    return t;
}

}  // namespace

const GaussRule& gauss_legendre(int order)
{
    static const std::vector<GaussRule> table = build_table();
    if (order < 1 || order > kMaxGaussOrder)
        throw Error(ErrorCode::InvalidArgument, "numerics", "Gauss-Legendre order out of range");
    return table[order];
}

}  // namespace varjac::numerics
