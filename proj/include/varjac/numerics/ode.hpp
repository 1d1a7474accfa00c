#pragma once

#include <algorithm>
#include <cmath>

#include "varjac/common.hpp"
#include "varjac/error.hpp"

namespace varjac::numerics {

struct StepResult {
    Complex z;
    double h_used = 0.0;  // accepted step
    double h_next = 0.0;  // proposal for the following step
    int rejections = 0;
};

// Dormand-Prince 5(4) for autonomous complex fields dz/ds = f(z), with a PI
// step-size controller. Mixed error model: atol + rtol*|z|.
class DormandPrince {
public:
    DormandPrince(double atol, double rtol = 0.0) : atol_(atol), rtol_(rtol) {}

    // Advance one accepted step, never longer than h_max.
    template <class Field>
    StepResult step(Field&& f, Complex z, double h_try, double h_max, double h_min = 1e-15)
    {
        double h = std::min(h_try, h_max);
        StepResult res;
        for (;;) {
            if (h < h_min) throw Error(ErrorCode::TraceStalled, "numerics", "step-size underflow");
            const Complex k1 = f(z);
            const Complex k2 = f(z + h * (a21 * k1));
            const Complex k3 = f(z + h * (a31 * k1 + a32 * k2));
            const Complex k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const Complex k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Complex k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Complex zn = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Complex k7 = f(zn);
            const Complex e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double sc = atol_ + rtol_ * std::max(std::abs(z), std::abs(zn));
            const double err = std::abs(e) / sc;
            if (err <= 1.0) {
                // PI controller (Gustafsson), exponents as in Hairer-Wanner
                double fac = err == 0.0 ? 5.0
                                        : 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev_, 0.4 / 5.0);
                fac = std::clamp(fac, 0.2, 5.0);
                if (res.rejections > 0) fac = std::min(fac, 1.0);
                err_prev_ = std::max(err, 1e-4);
                res.z = zn;
                res.h_used = h;
                res.h_next = h * fac;
                return res;
            }
            ++res.rejections;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }

    void reset() { err_prev_ = 1e-4; }

private:
    double atol_, rtol_;
    double err_prev_ = 1e-4;

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

// Convenience wrapper matching the plain "one adaptive step" contract.
template <class Field>
StepResult ode_step_adaptive(Field&& f, Complex z, double h_try, double tol, double h_max = 1e300)
{
    DormandPrince dp(tol);
    return dp.step(f, z, h_try, h_max);
}

}  // namespace varjac::numerics
