#pragma once

#include <mpfr.h>

#include "varjac/common.hpp"

namespace varjac::jacobi::detail {

// Minimal RAII complex number over MPFR; only what the Horner loop needs.
class MpComplex {
public:
    explicit MpComplex(mpfr_prec_t prec)
    {
        mpfr_init2(re_, prec);
        mpfr_init2(im_, prec);
        mpfr_set_zero(re_, 1);
        mpfr_set_zero(im_, 1);
    }
    ~MpComplex()
    {
        mpfr_clear(re_);
        mpfr_clear(im_);
    }
    MpComplex(const MpComplex&) = delete;
    MpComplex& operator=(const MpComplex&) = delete;

    mpfr_ptr re() { return re_; }
    mpfr_ptr im() { return im_; }
    mpfr_srcptr re() const { return re_; }
    mpfr_srcptr im() const { return im_; }

    void set(Complex z)
    {
        mpfr_set_d(re_, z.real(), MPFR_RNDN);
        mpfr_set_d(im_, z.imag(), MPFR_RNDN);
    }
    void set(const MpComplex& o)
    {
        mpfr_set(re_, o.re_, MPFR_RNDN);
        mpfr_set(im_, o.im_, MPFR_RNDN);
    }
    Complex to_complex() const { return {mpfr_get_d(re_, MPFR_RNDN), mpfr_get_d(im_, MPFR_RNDN)}; }

private:
    mpfr_t re_, im_;
};

// Scratch registers for complex products and quotients.
struct MpScratch {
    explicit MpScratch(mpfr_prec_t prec)
    {
        for (auto& t : t_) mpfr_init2(t, prec);
    }
    ~MpScratch()
    {
        for (auto& t : t_) mpfr_clear(t);
    }
    MpScratch(const MpScratch&) = delete;
    MpScratch& operator=(const MpScratch&) = delete;

    // out = a * b (out may alias a or b)
    void mul(MpComplex& out, const MpComplex& a, const MpComplex& b)
    {
        mpfr_mul(t_[0], a.re(), b.re(), MPFR_RNDN);
        mpfr_mul(t_[1], a.im(), b.im(), MPFR_RNDN);
        mpfr_mul(t_[2], a.re(), b.im(), MPFR_RNDN);
        mpfr_mul(t_[3], a.im(), b.re(), MPFR_RNDN);
        mpfr_sub(out.re(), t_[0], t_[1], MPFR_RNDN);
        mpfr_add(out.im(), t_[2], t_[3], MPFR_RNDN);
    }
    // out = a / b (out may alias a or b)
    void div(MpComplex& out, const MpComplex& a, const MpComplex& b)
    {
        mpfr_sqr(t_[0], b.re(), MPFR_RNDN);
        mpfr_sqr(t_[1], b.im(), MPFR_RNDN);
        mpfr_add(t_[4], t_[0], t_[1], MPFR_RNDN);
        mpfr_mul(t_[0], a.re(), b.re(), MPFR_RNDN);
        mpfr_mul(t_[1], a.im(), b.im(), MPFR_RNDN);
        mpfr_mul(t_[2], a.im(), b.re(), MPFR_RNDN);
        mpfr_mul(t_[3], a.re(), b.im(), MPFR_RNDN);
        mpfr_add(t_[0], t_[0], t_[1], MPFR_RNDN);
        mpfr_sub(t_[2], t_[2], t_[3], MPFR_RNDN);
        mpfr_div(out.re(), t_[0], t_[4], MPFR_RNDN);
        mpfr_div(out.im(), t_[2], t_[4], MPFR_RNDN);
    }

private:
    mpfr_t t_[5];
};

}  // namespace varjac::jacobi::detail
