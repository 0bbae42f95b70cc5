#pragma once

#include <stdexcept>
#include <string>

#include "heilbronn/interval.hpp"
#include "heilbronn/rational.hpp"

namespace heilbronn::exact {

inline bool is_squarefree(long d) {
    if (d < 1) return false;
    for (long q = 2; q * q <= d; ++q)
        if (d % (q * q) == 0) return false;
    return true;
}

/// Element a + b*sqrt(d) of a real quadratic field. d == 0 encodes a plain
/// rational (b is forced to zero); otherwise d is square-free and >= 2.
/// Arithmetic between elements of distinct fields is rejected unless one
/// operand is rational.
struct QuadExt {
    long d = 0;
    Rational a, b;

    QuadExt() = default;
    QuadExt(Rational value) : d(0), a(std::move(value)), b(0) {}
    QuadExt(Rational a_, Rational b_, long d_) : d(d_), a(std::move(a_)), b(std::move(b_)) {
        if (b.is_zero()) {
            d = 0;
        } else {
            if (d < 2 || !is_squarefree(d))
                throw std::invalid_argument("QuadExt: discriminant must be square-free and >= 2");
        }
    }

    bool is_rational() const { return d == 0; }

    int sign() const {
        if (d == 0) return a.sign();
        int sa = a.sign(), sb = b.sign();
        if (sa == 0) return sb;
        if (sb == 0) return sa;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 against d*b^2 (never equal, sqrt(d) irrational)
        int cmp = (a * a - b * b * Rational(d)).sign();
        return sa > 0 ? cmp : -cmp;
    }

    friend bool operator==(const QuadExt& u, const QuadExt& v) {
        return u.d == v.d && u.a == v.a && u.b == v.b;
    }
    friend bool operator!=(const QuadExt& u, const QuadExt& v) { return !(u == v); }

    Interval to_interval(mpfr_prec_t prec) const {
        Interval r = Interval::from_rational(a, prec);
        if (d != 0) {
            Interval rd = Interval::from_rational(Rational(d), prec).sqrt();
            r = r + Interval::from_rational(b, prec) * rd;
        }
        return r;
    }
    double to_double() const { return to_interval(64).mid_double(); }

    std::string str() const {
        if (d == 0) return a.str();
        return a.str() + " + (" + b.str() + ")*sqrt(" + std::to_string(d) + ")";
    }
};

namespace detail {
inline long unify_field(const QuadExt& u, const QuadExt& v) {
    if (u.d == 0) return v.d;
    if (v.d == 0 || u.d == v.d) return u.d;
    throw std::invalid_argument("QuadExt: mismatched discriminants " + std::to_string(u.d) +
                                " vs " + std::to_string(v.d));
}
} // namespace detail

inline QuadExt operator+(const QuadExt& u, const QuadExt& v) {
    long d = detail::unify_field(u, v);
    return QuadExt(u.a + v.a, u.b + v.b, d);
}
inline QuadExt operator-(const QuadExt& u, const QuadExt& v) {
    long d = detail::unify_field(u, v);
    return QuadExt(u.a - v.a, u.b - v.b, d);
}
inline QuadExt operator-(const QuadExt& u) { return QuadExt(-u.a, -u.b, u.d); }
inline QuadExt operator*(const QuadExt& u, const QuadExt& v) {
    long d = detail::unify_field(u, v);
    Rational dd(d);
    return QuadExt(u.a * v.a + u.b * v.b * dd, u.a * v.b + u.b * v.a, d);
}
inline QuadExt inverse(const QuadExt& u) {
    if (u.sign() == 0) throw std::domain_error("QuadExt: inverse of zero");
    if (u.d == 0) return QuadExt(u.a.inverse());
    Rational norm = u.a * u.a - u.b * u.b * Rational(u.d);
    return QuadExt(u.a / norm, -u.b / norm, u.d);
}
inline QuadExt operator/(const QuadExt& u, const QuadExt& v) { return u * inverse(v); }

inline int compare(const QuadExt& u, const QuadExt& v) { return (u - v).sign(); }

} // namespace heilbronn::exact
