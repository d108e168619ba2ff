#pragma once

#include <cstdint>

#define MPFR_USE_INTMAX_T 1
#include <mpfr.h>

#include <string>
#include <utility>

#include "crn/errors.hpp"

namespace crn {

// Adaptive-precision real number. Every value carries an explicit precision P
// (bits of mantissa); arithmetic rounds to nearest and the result precision is
// the minimum of the operand precisions, so precision never silently inflates.
// Relative rounding error of a single operation is at most 2^(1-P).
class Real {
  public:
    static constexpr long min_precision = 64;

    Real() { mpfr_init2(v_, min_precision); mpfr_set_zero(v_, 1); }
    explicit Real(long prec) { check_prec(prec); mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double x, long prec) { check_prec(prec); mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(long long x, long prec) { check_prec(prec); mpfr_init2(v_, prec); mpfr_set_sj(v_, x, MPFR_RNDN); }
    Real(const std::string& dec, long prec) {
        check_prec(prec);
        mpfr_init2(v_, prec);
        if (mpfr_set_str(v_, dec.c_str(), 10, MPFR_RNDN) != 0)
            throw ConfigError("unparseable decimal literal: " + dec);
    }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, min_precision); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    long precision() const { return mpfr_get_prec(v_); }

    // Returns the same value rounded to precision P (P >= 64 enforced).
    Real with_precision(long prec) const {
        check_prec(prec);
        Real r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Decimal string with the given number of significant digits, round trip
    // stable for digits >= P * log10(2) + 2.
    std::string to_string(int digits) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_negative() const { return mpfr_sgn(v_) < 0; }
    bool is_positive() const { return mpfr_sgn(v_) > 0; }
    int sgn() const { return mpfr_sgn(v_); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }

    friend Real operator+(const Real& a, const Real& b) { return bin(mpfr_add, a, b); }
    friend Real operator-(const Real& a, const Real& b) { return bin(mpfr_sub, a, b); }
    friend Real operator*(const Real& a, const Real& b) { return bin(mpfr_mul, a, b); }
    friend Real operator/(const Real& a, const Real& b) {
        if (mpfr_zero_p(b.v_)) throw BudgetError("division by zero");
        return bin(mpfr_div, a, b);
    }
    Real operator-() const { Real r(precision()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    Real& operator+=(const Real& b) { *this = *this + b; return *this; }
    Real& operator-=(const Real& b) { *this = *this - b; return *this; }
    Real& operator*=(const Real& b) { *this = *this * b; return *this; }
    Real& operator/=(const Real& b) { *this = *this / b; return *this; }

    friend Real operator*(long long a, const Real& b) {
        static_assert(sizeof(long) == sizeof(long long), "LP64 platform expected");
        Real r(b.precision());
        mpfr_mul_si(r.v_, b.v_, static_cast<long>(a), MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, long long b) { return b * a; }
    friend Real operator/(const Real& a, long long b) {
        if (b == 0) throw BudgetError("division by zero");
        Real r(a.precision());
        mpfr_div_si(r.v_, a.v_, static_cast<long>(b), MPFR_RNDN);
        return r;
    }
    friend Real operator+(const Real& a, long long b) {
        Real r(a.precision());
        mpfr_add_si(r.v_, a.v_, static_cast<long>(b), MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, long long b) { return a + (-b); }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

    friend Real abs(const Real& a) { Real r(a.precision()); mpfr_abs(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sqrt(const Real& a) { Real r(a.precision()); mpfr_sqrt(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real sin(const Real& a) { Real r(a.precision()); mpfr_sin(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real cos(const Real& a) { Real r(a.precision()); mpfr_cos(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real tan(const Real& a) { Real r(a.precision()); mpfr_tan(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real atan(const Real& a) { Real r(a.precision()); mpfr_atan(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real exp(const Real& a) { Real r(a.precision()); mpfr_exp(r.v_, a.v_, MPFR_RNDN); return r; }
    friend Real log(const Real& a) {
        if (mpfr_sgn(a.v_) <= 0) throw BudgetError("log of non-positive value");
        Real r(a.precision());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real log2(const Real& a) {
        if (mpfr_sgn(a.v_) <= 0) throw BudgetError("log2 of non-positive value");
        Real r(a.precision());
        mpfr_log2(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend Real floor(const Real& a) { Real r(a.precision()); mpfr_floor(r.v_, a.v_); return r; }
    friend Real pow_si(const Real& a, long e) { Real r(a.precision()); mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN); return r; }
    friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
    friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

    // x - floor(x), in [0,1).
    friend Real frac(const Real& a) {
        Real r(a.precision());
        mpfr_frac(r.v_, a.v_, MPFR_RNDN);
        if (mpfr_sgn(r.v_) < 0) mpfr_add_ui(r.v_, r.v_, 1, MPFR_RNDN);
        return r;
    }

    // Exact scaling by 2^k.
    Real mul_2si(long k) const { Real r(precision()); mpfr_mul_2si(r.v_, v_, k, MPFR_RNDN); return r; }

    // Rounds to the nearest multiple of 2^-g (round half to even).
    Real quantize(long g) const {
        Real r(precision());
        mpfr_mul_2si(r.v_, v_, g, MPFR_RNDN);
        mpfr_rint(r.v_, r.v_, MPFR_RNDN);
        mpfr_div_2si(r.v_, r.v_, g, MPFR_RNDN);
        return r;
    }

    long long to_ll() const { return mpfr_get_sj(v_, MPFR_RNDN); }

    static Real pi(long prec) { Real r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
    // 2^k at the given precision (exact).
    static Real pow2(long k, long prec) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, k, MPFR_RNDN);
        return r;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

  private:
    static void check_prec(long prec) {
        if (prec < min_precision) throw ConfigError("precision below 64 bits requested");
    }
    template <typename F>
    static Real bin(F op, const Real& a, const Real& b) {
        long p = a.precision() < b.precision() ? a.precision() : b.precision();
        Real r(p);
        op(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

}  // namespace crn
