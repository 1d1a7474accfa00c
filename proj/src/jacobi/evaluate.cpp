#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mp_complex.hpp"
#include "varjac/error.hpp"
#include "varjac/jacobi.hpp"

namespace varjac::jacobi {

namespace {

const char* kModule = "jacobi";

constexpr int kMarginBits = 60;
constexpr int kMaxPrecision = 8192;

// generalized binomial C(a, m) as a falling product
Complex binomial(Complex a, int m)
{
    Complex c = 1.0;
    for (int j = 0; j < m; ++j) c *= (a - static_cast<double>(j)) / static_cast<double>(j + 1);
    return c;
}

// 2F1 value and d/dx, both scaled by 2^-exponent so that they fit in double
struct HornerResult {
    Complex s, ds;
    long exponent = 0;
};

HornerResult horner_mp(const VaryingJacobiSpec& spec, Complex z, mpfr_prec_t prec)
{
    using detail::MpComplex;
    const int n = spec.n;
    const Complex alpha = spec.alpha(), beta = spec.beta();

    detail::MpScratch sc(prec);
    MpComplex x(prec), S(prec), D(prec), num(prec), den(prec), r(prec), tmp(prec), apb(prec), a1(prec);
    // x = (1 - z) / 2 formed in extended precision
    mpfr_set_d(tmp.re(), z.real(), MPFR_RNDN);
    mpfr_ui_sub(x.re(), 1, tmp.re(), MPFR_RNDN);
    mpfr_div_2ui(x.re(), x.re(), 1, MPFR_RNDN);
    mpfr_set_d(x.im(), -0.5 * z.imag(), MPFR_RNDN);

    // apb = n + alpha + beta + 1, a1 = alpha + 1
    apb.set(alpha);
    mpfr_add_d(apb.re(), apb.re(), beta.real(), MPFR_RNDN);
    mpfr_add_d(apb.im(), apb.im(), beta.imag(), MPFR_RNDN);
    mpfr_add_si(apb.re(), apb.re(), n + 1, MPFR_RNDN);
    a1.set(alpha);
    mpfr_add_si(a1.re(), a1.re(), 1, MPFR_RNDN);

    mpfr_set_si(S.re(), 1, MPFR_RNDN);
    mpfr_set_zero(S.im(), 1);
    for (int k = n - 1; k >= 0; --k) {
        // r_k = (k - n)(k + apb) / ((k + a1)(k + 1))
        num.set(apb);
        mpfr_add_si(num.re(), num.re(), k, MPFR_RNDN);
        mpfr_mul_si(num.re(), num.re(), k - n, MPFR_RNDN);
        mpfr_mul_si(num.im(), num.im(), k - n, MPFR_RNDN);
        den.set(a1);
        mpfr_add_si(den.re(), den.re(), k, MPFR_RNDN);
        mpfr_mul_si(den.re(), den.re(), k + 1, MPFR_RNDN);
        mpfr_mul_si(den.im(), den.im(), k + 1, MPFR_RNDN);
        sc.div(r, num, den);
        // D <- r (S + x D), S <- 1 + r x S
        sc.mul(tmp, x, D);
        mpfr_add(tmp.re(), tmp.re(), S.re(), MPFR_RNDN);
        mpfr_add(tmp.im(), tmp.im(), S.im(), MPFR_RNDN);
        sc.mul(D, r, tmp);
        sc.mul(tmp, r, x);
        sc.mul(S, tmp, S);
        mpfr_add_si(S.re(), S.re(), 1, MPFR_RNDN);
    }
    long e = 0;
    for (mpfr_srcptr v : {S.re(), S.im(), D.re(), D.im()})
        if (mpfr_regular_p(v)) e = std::max(e, static_cast<long>(mpfr_get_exp(v)));
    for (MpComplex* c : {&S, &D}) {
        mpfr_mul_2si(c->re(), c->re(), -e, MPFR_RNDN);
        mpfr_mul_2si(c->im(), c->im(), -e, MPFR_RNDN);
    }
    return {S.to_complex(), D.to_complex(), e};
}

// log2 of sum |t_k| and of sum k |t_k| for the 2F1 terms at x
std::pair<double, double> log2_term_mass(const VaryingJacobiSpec& spec, Complex x)
{
    const Complex alpha = spec.alpha(), beta = spec.beta();
    const double n = spec.n;
    const Complex apb = n + alpha + beta + 1.0;
    double lt = 0.0, lsum = 0.0, ldsum = -1e300;
    auto add = [](double a, double b) { return a < b ? b + std::log2(1.0 + std::exp2(a - b)) : a + std::log2(1.0 + std::exp2(b - a)); };
    for (int k = 0; k < spec.n; ++k) {
        const Complex r = (k - n) * (static_cast<double>(k) + apb) / ((static_cast<double>(k) + alpha + 1.0) * (k + 1.0));
        lt += std::log2(std::abs(r * x));
        lsum = add(lsum, lt);
        ldsum = add(ldsum, lt + std::log2(k + 1.0));
    }
    return {lsum, ldsum};
}

struct StableEval {
    Complex pref;
    HornerResult h;
    int precision;
};

StableEval stable_impl(const VaryingJacobiSpec& spec, Complex z)
{
    const Complex x = 0.5 * (1.0 - z);
    const auto [lmass, ldmass] = log2_term_mass(spec, x);
    const Complex pref = binomial(spec.alpha() + static_cast<double>(spec.n), spec.n);

    int prec = 64 + kMarginBits + static_cast<int>(std::ceil(std::max(lmass, 0.0)));
    HornerResult h{};
    for (int attempt = 0; attempt < 6; ++attempt) {
        h = horner_mp(spec, z, prec);
        // bits lost to cancellation in the value and in the x-derivative; next to
        // a root the value only needs to be accurate relative to |S'| ulp(x)
        const double ls = std::log2(std::max(std::abs(h.s), 1e-300)) + h.exponent;
        const double lds = std::log2(std::max(std::abs(h.ds), 1e-300)) + h.exponent;
        const double lfloor = lds + std::log2(std::max(std::abs(x), 1.0)) - 53.0;
        const double lost_v = lmass - std::max(ls, lfloor);
        const double lost_d = ldmass - std::log2(std::max(std::abs(x), 1e-300)) - lds;
        const int need = static_cast<int>(std::ceil(std::max({lost_v, lost_d, 0.0}))) + kMarginBits + 20;
        if (need <= prec || prec >= kMaxPrecision) break;
        prec = std::min(kMaxPrecision, need);
    }
    return {pref, h, prec};
}

}  // namespace

VaryingJacobiSpec VaryingJacobiSpec::make(int n, Complex A, double B)
{
    if (n < 0) throw Error(ErrorCode::InvalidArgument, kModule, "degree must be >= 0");
    if (!(B > 0.0)) throw Error(ErrorCode::ParametersOutOfScope, kModule, "B must be positive");
    return {n, A, B};
}

ValueDerivative eval_recurrence(const VaryingJacobiSpec& spec, Complex z)
{
    const int n = spec.n;
    const Complex a = spec.alpha(), b = spec.beta();
    if (n == 0) return {1.0, 0.0};

    // guard the recurrence denominators
    for (int k = 2; k <= n; ++k) {
        const Complex s = 2.0 * k + a + b;
        const Complex den = 2.0 * k * (static_cast<double>(k) + a + b) * (s - 2.0);
        if (std::abs(den) < 1e-300 || std::abs(s) < 1e-12 || std::abs(s - 1.0) < 1e-12) {
            if (n > kExplicitMaxDegree)
                throw Error(ErrorCode::DegenerateParameters, kModule, "degenerate parameters");
            // fall back to the explicit sum, differentiated term by term
            Complex v = eval_explicit(spec, z), d{};
            for (int k2 = 0; k2 <= n; ++k2) {
                const Complex c = binomial(static_cast<double>(n) + a, n - k2) * binomial(static_cast<double>(n) + b, k2);
                Complex dk{};
                if (k2 > 0) dk += static_cast<double>(k2) * std::pow(z - 1.0, k2 - 1) * std::pow(z + 1.0, n - k2);
                if (k2 < n) dk += static_cast<double>(n - k2) * std::pow(z - 1.0, k2) * std::pow(z + 1.0, n - k2 - 1);
                d += c * dk;
            }
            return {v, d * std::pow(0.5, n)};
        }
    }

    Complex p0 = 1.0, d0 = 0.0;
    Complex p1 = 0.5 * ((a + b + 2.0) * z + (a - b));
    Complex d1 = 0.5 * (a + b + 2.0);
    for (int k = 2; k <= n; ++k) {
        const double kk = k;
        const Complex s = 2.0 * kk + a + b;
        const Complex c0 = 2.0 * kk * (kk + a + b) * (s - 2.0);
        const Complex c1 = (s - 1.0) * s * (s - 2.0);
        const Complex c2 = (s - 1.0) * (a * a - b * b);
        const Complex c3 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * s;
        const Complex p2 = ((c1 * z + c2) * p1 - c3 * p0) / c0;
        const Complex d2 = ((c1 * z + c2) * d1 + c1 * p1 - c3 * d0) / c0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    return {p1, d1};
}

Complex eval_explicit(const VaryingJacobiSpec& spec, Complex z)
{
    const int n = spec.n;
    if (n > kExplicitMaxDegree) throw Error(ErrorCode::OracleRangeExceeded, kModule, "oracle range exceeded");
    const Complex a = spec.alpha(), b = spec.beta();
    Complex sum{};
    for (int k = 0; k <= n; ++k)
        sum += binomial(static_cast<double>(n) + a, n - k) * binomial(static_cast<double>(n) + b, k) *
               std::pow(z - 1.0, k) * std::pow(z + 1.0, n - k);
    return sum * std::pow(0.5, n);
}

ValueDerivative eval_stable(const VaryingJacobiSpec& spec, Complex z)
{
    if (spec.n == 0) return {1.0, 0.0};
    const StableEval e = stable_impl(spec, z);
    const double sc = std::ldexp(1.0, static_cast<int>(e.h.exponent));
    return {e.pref * e.h.s * sc, -0.5 * e.pref * e.h.ds * sc};
}

Complex log_eval_stable(const VaryingJacobiSpec& spec, Complex z)
{
    if (spec.n == 0) return 0.0;
    const StableEval e = stable_impl(spec, z);
    return std::log(e.pref) + std::log(e.h.s) + static_cast<double>(e.h.exponent) * std::log(2.0);
}

Complex newton_ratio(const VaryingJacobiSpec& spec, Complex z)
{
    if (spec.n == 0) return 0.0;
    const StableEval e = stable_impl(spec, z);
    if (e.h.ds == 0.0) return e.h.s == 0.0 ? Complex{} : Complex(std::numeric_limits<double>::infinity());
    return -2.0 * e.h.s / e.h.ds;
}

int stable_precision(const VaryingJacobiSpec& spec, Complex z) { return spec.n == 0 ? 53 : stable_impl(spec, z).precision; }

}  // namespace varjac::jacobi
