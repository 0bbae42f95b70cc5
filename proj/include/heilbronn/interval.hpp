#pragma once

#include <mpfr.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "heilbronn/rational.hpp"

namespace heilbronn::exact {

struct EvalDomainError : std::runtime_error {
    bool straddles_zero; // true when more precision might still resolve it
    explicit EvalDomainError(const std::string& what, bool straddles)
        : std::runtime_error(what), straddles_zero(straddles) {}
};

/// Closed interval [lo, hi] with outward-rounded MPFR endpoints.
/// Every operation returns an enclosure of the exact image.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 64) : prec_(prec) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const Interval& o) : prec_(o.prec_) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval(Interval&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(lo_, 2);
        mpfr_init2(hi_, 2);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }
    Interval& operator=(Interval o) noexcept {
        std::swap(prec_, o.prec_);
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    static Interval from_rational(const Rational& r, mpfr_prec_t prec) {
        Interval v(prec);
        mpfr_set_q(v.lo_, r.raw().get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(v.hi_, r.raw().get_mpq_t(), MPFR_RNDU);
        return v;
    }
    static Interval from_rationals(const Rational& lo, const Rational& hi, mpfr_prec_t prec) {
        if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
        Interval v(prec);
        mpfr_set_q(v.lo_, lo.raw().get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(v.hi_, hi.raw().get_mpq_t(), MPFR_RNDU);
        return v;
    }
    static Interval from_double(double x, mpfr_prec_t prec) {
        Interval v(prec);
        mpfr_set_d(v.lo_, x, MPFR_RNDD);
        mpfr_set_d(v.hi_, x, MPFR_RNDU);
        return v;
    }

    mpfr_prec_t precision() const { return prec_; }
    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_double() const { return 0.5 * (lo_double() + hi_double()); }
    double width_double() const {
        mpfr_t w;
        mpfr_init2(w, prec_);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool is_negative() const { return mpfr_sgn(hi_) < 0; }
    bool is_positive() const { return mpfr_sgn(lo_) > 0; }
    bool contains(const Rational& r) const {
        return mpfr_cmp_q(lo_, r.raw().get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, r.raw().get_mpq_t()) >= 0;
    }
    bool contains(const Interval& o) const {
        return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
    }
    bool disjoint_below(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a) {
        Interval r(a.prec_);
        mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        // lo: min of the four endpoint products rounded down
        mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        // hi: max of the four rounded up
        mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero())
            throw EvalDomainError("Interval: division by interval containing zero", true);
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        mpfr_div(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_div(t, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(t, a.hi_, b.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(t, a.hi_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        mpfr_div(t, a.lo_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_div(t, a.hi_, b.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_div(t, a.hi_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }

    Interval sqrt() const {
        if (is_negative())
            throw EvalDomainError("Interval: sqrt of a negative enclosure", false);
        if (mpfr_sgn(lo_) < 0)
            throw EvalDomainError("Interval: sqrt of an enclosure straddling zero", true);
        Interval r(prec_);
        mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
        mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
        return r;
    }
    Interval cbrt() const {
        Interval r(prec_);
        mpfr_cbrt(r.lo_, lo_, MPFR_RNDD);
        mpfr_cbrt(r.hi_, hi_, MPFR_RNDU);
        return r;
    }
    Interval abs() const {
        Interval r(prec_);
        if (mpfr_sgn(lo_) >= 0) return *this;
        if (mpfr_sgn(hi_) <= 0) return -*this;
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, hi_, MPFR_RNDU);
        return r;
    }

    Interval hull(const Interval& o) const {
        Interval r(std::max(prec_, o.prec_));
        mpfr_min(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }

    std::string str(int digits = 20) const {
        char* a = nullptr;
        char* b = nullptr;
        mpfr_asprintf(&a, "%.*Rg", digits, lo_);
        mpfr_asprintf(&b, "%.*Rg", digits, hi_);
        std::string s = std::string("[") + a + ", " + b + "]";
        mpfr_free_str(a);
        mpfr_free_str(b);
        return s;
    }

private:
    mpfr_prec_t prec_;
    mpfr_t lo_, hi_;
};

} // namespace heilbronn::exact
