#pragma once

#include <mpfr.h>

// Extended-precision arithmetic for the scale-sequence oracles.
namespace ufix::oracle {

// RAII wrapper over a 256-bit MPFR value.
struct Big {
    mpfr_t v;
    Big() { mpfr_init2(v, 256); mpfr_set_d(v, 0, MPFR_RNDN); }
    explicit Big(double d) : Big() { mpfr_set_d(v, d, MPFR_RNDN); }
    Big(const Big& o) : Big() { mpfr_set(v, o.v, MPFR_RNDN); }
    Big& operator=(const Big& o) { mpfr_set(v, o.v, MPFR_RNDN); return *this; }
    ~Big() { mpfr_clear(v); }
    double d() const { return mpfr_get_d(v, MPFR_RNDN); }
};
inline Big add(const Big& a, const Big& b) { Big r; mpfr_add(r.v, a.v, b.v, MPFR_RNDN); return r; }
inline Big mul(const Big& a, const Big& b) { Big r; mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); return r; }
inline Big div(const Big& a, const Big& b) { Big r; mpfr_div(r.v, a.v, b.v, MPFR_RNDN); return r; }
inline Big exp(const Big& a) { Big r; mpfr_exp(r.v, a.v, MPFR_RNDN); return r; }
inline Big log(const Big& a) { Big r; mpfr_log(r.v, a.v, MPFR_RNDN); return r; }
// log(e^a + e^b)
inline Big logaddexp(const Big& a, const Big& b) {
    const bool a_big = mpfr_cmp(a.v, b.v) >= 0;
    const Big& hi = a_big ? a : b;
    const Big& lo = a_big ? b : a;
    Big diff;
    mpfr_sub(diff.v, lo.v, hi.v, MPFR_RNDN);
    Big r;
    mpfr_exp(r.v, diff.v, MPFR_RNDN);
    mpfr_log1p(r.v, r.v, MPFR_RNDN);
    return add(hi, r);
}

}  // namespace ufix::oracle
