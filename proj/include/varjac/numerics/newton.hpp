#pragma once

#include <cmath>

#include "varjac/common.hpp"
#include "varjac/error.hpp"

namespace varjac::numerics {

// Damped Newton. Halves the step while |f| grows, gives up quietly after
// max_iter (the caller checks the residual it cares about).
template <class F, class DF>
Complex newton_polish(F&& f, DF&& df, Complex z, double tol = 1e-14, int max_iter = 60)
{
    Complex fz = f(z);
    for (int it = 0; it < max_iter; ++it) {
        const Complex d = df(z);
        if (std::abs(d) < 1e-300) throw Error(ErrorCode::DerivativeUnderflow, "numerics", "derivative underflow");
        Complex step = fz / d;
        Complex zn = z - step;
        Complex fn = f(zn);
        for (int k = 0; k < 30 && std::abs(fn) > std::abs(fz); ++k) {
            step *= 0.5;
            zn = z - step;
            fn = f(zn);
        }
        z = zn;
        fz = fn;
        if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

// Second-order one-sided derivative of g along `dir` at x0, using x0, x0+h, x0+2h.
template <class G>
double one_sided_derivative(G&& g, Complex x0, Complex dir, double h)
{
    const double f0 = g(x0), f1 = g(x0 + h * dir), f2 = g(x0 + 2.0 * h * dir);
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

}  // namespace varjac::numerics
