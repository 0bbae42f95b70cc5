#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "heilbronn/rational.hpp"

namespace heilbronn::exact {

/// Univariate polynomial with rational coefficients, ascending degree order.
/// The zero polynomial is an empty coefficient list (degree -1).
struct Poly {
    std::vector<Rational> c;

    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { normalize(); }

    static Poly from_longs(const std::vector<long>& coeffs) {
        std::vector<Rational> r(coeffs.begin(), coeffs.end());
        return Poly(std::move(r));
    }

    void normalize() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const Rational& leading() const { return c.back(); }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    double eval_double(double x) const {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->to_double();
        return acc;
    }

    Poly derivative() const {
        if (degree() < 1) return Poly();
        std::vector<Rational> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * Rational(static_cast<long>(i));
        return Poly(std::move(d));
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            if (c[k].is_zero()) continue;
            if (!out.empty()) out += c[k].sign() > 0 ? " + " : " - ";
            else if (c[k].sign() < 0) out += "-";
            Rational a = c[k].abs();
            if (k == 0 || a != Rational(1)) out += a.str();
            if (k >= 1) {
                if (a != Rational(1)) out += "*";
                out += var;
                if (k >= 2) out += "^" + std::to_string(k);
            }
        }
        return out;
    }
};

inline Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.c.size()) r[i] += a.c[i];
        if (i < b.c.size()) r[i] += b.c[i];
    }
    return Poly(std::move(r));
}

inline Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rational> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.c.size()) r[i] += a.c[i];
        if (i < b.c.size()) r[i] -= b.c[i];
    }
    return Poly(std::move(r));
}

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> r(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
}

inline Poly operator*(const Poly& a, const Rational& s) {
    std::vector<Rational> r(a.c);
    for (auto& x : r) x *= s;
    return Poly(std::move(r));
}

/// Quotient and remainder of a / b over the rationals.
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    Poly rem = a;
    std::vector<Rational> q;
    if (a.degree() >= b.degree()) q.assign(a.degree() - b.degree() + 1, Rational(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int shift = rem.degree() - b.degree();
        Rational f = rem.leading() / b.leading();
        q[shift] = f;
        for (int i = 0; i <= b.degree(); ++i) rem.c[i + shift] -= f * b.c[i];
        rem.normalize();
    }
    return {Poly(std::move(q)), rem};
}

/// Divides out the gcd of all numerators over the lcm of denominators,
/// keeping the sign. Controls coefficient growth in remainder chains.
inline Poly primitive_part(const Poly& p) {
    if (p.is_zero()) return p;
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& x : p.c) {
        if (x.is_zero()) continue;
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.den().get_mpz_t());
    }
    Rational scale{den_lcm, num_gcd};
    return p * scale.abs();
}

inline Poly gcd(Poly a, Poly b) {
    a = primitive_part(a);
    b = primitive_part(b);
    while (!b.is_zero()) {
        Poly r = divrem(a, b).second;
        a = std::move(b);
        b = primitive_part(r);
    }
    if (a.is_zero()) return a;
    // monic for a canonical representative
    return a * a.leading().inverse();
}

inline Poly squarefree_part(const Poly& p) {
    if (p.degree() <= 1) return p;
    Poly g = gcd(p, p.derivative());
    if (g.degree() < 1) return p;
    return divrem(p, g).first;
}

namespace detail {

inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(primitive_part(p));
    Poly d = primitive_part(p.derivative());
    if (!d.is_zero()) chain.push_back(d);
    while (chain.back().degree() > 0) {
        Poly r = divrem(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        r = primitive_part(r);
        chain.push_back(r * Rational(-1));
    }
    return chain;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
    int vars = 0, prev = 0;
    for (const auto& q : chain) {
        int s = q.eval(x).sign();
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

} // namespace detail

/// Rational interval (lo, hi) containing exactly one real root of poly,
/// with a strict sign change at the endpoints.
struct IsolatingInterval {
    Rational lo, hi;
    Poly poly;

    Rational width() const { return hi - lo; }
    double midpoint() const { return ((lo + hi) * Rational(1, 2)).to_double(); }
};

namespace detail {

// Interior point of (a, b) where q does not vanish. The midpoint works unless
// it happens to be a root, in which case nearby rational offsets are tried.
inline Rational nonroot_point(const Poly& q, const Rational& a, const Rational& b) {
    static const long offsets[][2] = {{1, 2}, {3, 7}, {4, 7}, {5, 11}, {6, 11}, {7, 13}};
    for (auto [n, d] : offsets) {
        Rational m = a + (b - a) * Rational(n, d);
        if (q.eval(m).sign() != 0) return m;
    }
    throw std::logic_error("Poly: could not find a non-root split point");
}

inline void isolate_rec(const std::vector<Poly>& chain, const Poly& q, const Rational& a,
                        const Rational& b, int count, std::vector<IsolatingInterval>& out) {
    if (count == 0) return;
    if (count == 1) {
        out.push_back({a, b, q});
        return;
    }
    Rational m = nonroot_point(q, a, b);
    int left = sign_variations(chain, a) - sign_variations(chain, m);
    isolate_rec(chain, q, a, m, left, out);
    isolate_rec(chain, q, m, b, count - left, out);
}

} // namespace detail

/// Isolates all real roots of a nonzero polynomial. The squarefree part is
/// taken internally, so multiple roots are reported once.
inline std::vector<IsolatingInterval> sturm_isolate(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("sturm_isolate: zero polynomial");
    Poly q = squarefree_part(p);
    if (q.degree() == 0) return {};
    auto chain = detail::sturm_chain(q);

    // Cauchy bound, rounded up to an integer.
    Rational maxc(0);
    for (int i = 0; i < q.degree(); ++i) maxc = std::max(maxc, (q.c[i] / q.leading()).abs());
    mpz_class bz = (Rational(1) + maxc).num() / (Rational(1) + maxc).den() + 2;
    Rational bound(bz, mpz_class(1));

    Rational lo = -bound, hi = bound;
    if (q.eval(lo).sign() == 0 || q.eval(hi).sign() == 0)
        throw std::logic_error("sturm_isolate: root bound is not strict");

    int total = detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
    std::vector<IsolatingInterval> out;
    detail::isolate_rec(chain, q, lo, hi, total, out);
    std::sort(out.begin(), out.end(),
              [](const IsolatingInterval& x, const IsolatingInterval& y) { return x.lo < y.lo; });
    return out;
}

/// Bisects until hi - lo <= target, preserving the endpoint sign change.
inline IsolatingInterval refine_interval(IsolatingInterval iv, const Rational& target) {
    int slo = iv.poly.eval(iv.lo).sign();
    while (iv.width() > target) {
        Rational m = detail::nonroot_point(iv.poly, iv.lo, iv.hi);
        if (iv.poly.eval(m).sign() == slo) iv.lo = m;
        else iv.hi = m;
    }
    return iv;
}

/// Number of real roots of the (squarefree part of the) polynomial in (lo, hi).
inline int count_roots_in(const Poly& p, const Rational& lo, const Rational& hi) {
    Poly q = squarefree_part(p);
    if (q.degree() < 1) return 0;
    if (q.eval(lo).sign() == 0 || q.eval(hi).sign() == 0)
        throw std::invalid_argument("count_roots_in: endpoint is a root");
    auto chain = detail::sturm_chain(q);
    return detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
}

} // namespace heilbronn::exact
