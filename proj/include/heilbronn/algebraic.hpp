#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heilbronn/interval.hpp"
#include "heilbronn/polynomial.hpp"
#include "heilbronn/quadext.hpp"
#include "heilbronn/rational.hpp"

namespace heilbronn::exact {

struct UndecidedComparison : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExprKind { Rat, Add, Sub, Mul, Div, Neg, Sqrt, Cbrt, Root };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree over rational leaves with +,-,*,/ and real
/// square/cube roots. A Root node designates the unique real root of an
/// integer polynomial inside a rational isolating interval.
struct ExprNode {
    ExprKind kind;
    Rational value; // Rat
    Expr lhs, rhs;  // operands (unary ops use lhs)
    Poly poly;      // Root
    Rational root_lo, root_hi;
};

inline Expr rat(Rational v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Rat;
    n->value = std::move(v);
    return n;
}
inline Expr rat(long num, long den = 1) { return rat(Rational(num, den)); }

namespace detail {
inline Expr node(ExprKind k, Expr a, Expr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}
} // namespace detail

inline Expr add(Expr a, Expr b) { return detail::node(ExprKind::Add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return detail::node(ExprKind::Sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return detail::node(ExprKind::Mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return detail::node(ExprKind::Div, std::move(a), std::move(b)); }
inline Expr neg(Expr a) { return detail::node(ExprKind::Neg, std::move(a)); }
inline Expr sqrt_of(Expr a) { return detail::node(ExprKind::Sqrt, std::move(a)); }
inline Expr cbrt_of(Expr a) { return detail::node(ExprKind::Cbrt, std::move(a)); }

/// Tags the unique real root of poly in (lo, hi). Verified by a Sturm count.
inline Expr root_of(Poly poly, Rational lo, Rational hi) {
    if (poly.is_zero()) throw std::invalid_argument("root_of: zero polynomial");
    if (count_roots_in(poly, lo, hi) != 1)
        throw std::invalid_argument("root_of: interval does not isolate exactly one root");
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Root;
    n->poly = std::move(poly);
    n->root_lo = std::move(lo);
    n->root_hi = std::move(hi);
    return n;
}

inline Expr from_quadext(const QuadExt& q) {
    if (q.is_rational()) return rat(q.a);
    Expr radical = sqrt_of(rat(Rational(q.d)));
    return add(rat(q.a), mul(rat(q.b), radical));
}

// ---------------------------------------------------------------------------
// Interval evaluation

namespace detail {

inline Interval eval_once(const ExprNode& e, mpfr_prec_t prec) {
    switch (e.kind) {
    case ExprKind::Rat:
        return Interval::from_rational(e.value, prec);
    case ExprKind::Add:
        return eval_once(*e.lhs, prec) + eval_once(*e.rhs, prec);
    case ExprKind::Sub:
        return eval_once(*e.lhs, prec) - eval_once(*e.rhs, prec);
    case ExprKind::Mul:
        return eval_once(*e.lhs, prec) * eval_once(*e.rhs, prec);
    case ExprKind::Div:
        return eval_once(*e.lhs, prec) / eval_once(*e.rhs, prec);
    case ExprKind::Neg:
        return -eval_once(*e.lhs, prec);
    case ExprKind::Sqrt:
        return eval_once(*e.lhs, prec).sqrt();
    case ExprKind::Cbrt:
        return eval_once(*e.lhs, prec).cbrt();
    case ExprKind::Root: {
        Poly q = squarefree_part(e.poly);
        // refine two extra bits so outward rounding keeps the 2^(1-p) width bound
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(prec) + 2);
        IsolatingInterval iv = refine_interval({e.root_lo, e.root_hi, q},
                                               Rational(mpz_class(1), scale));
        return Interval::from_rationals(iv.lo, iv.hi, prec);
    }
    }
    throw std::logic_error("eval_once: unreachable");
}

} // namespace detail

/// Rigorous outward-rounded enclosure of the expression value. Enclosures
/// straddling a division or even-root domain boundary are retried at higher
/// working precision a bounded number of times before failing.
inline Interval interval_eval(const Expr& e, mpfr_prec_t precision_bits = 64) {
    if (!e) throw std::invalid_argument("interval_eval: empty expression");
    mpfr_prec_t p = precision_bits;
    for (int attempt = 0; attempt < 4; ++attempt, p *= 2) {
        try {
            return detail::eval_once(*e, p);
        } catch (const EvalDomainError& err) {
            if (!err.straddles_zero) throw;
        }
    }
    return detail::eval_once(*e, p);
}

inline double to_double(const Expr& e) { return interval_eval(e, 64).mid_double(); }

// ---------------------------------------------------------------------------
// Exact evaluation inside a quadratic field, when the expression permits it

namespace detail {

// Splits n = s^2 * d with d square-free. Fails (nullopt) when the square-free
// part cannot be certified with small trial divisors.
inline std::optional<std::pair<mpz_class, mpz_class>> split_square(mpz_class n) {
    mpz_class s = 1;
    for (long p = 2; p <= 10000; ++p) {
        mpz_class pp(p);
        mpz_class sq = pp * pp;
        while (mpz_divisible_p(n.get_mpz_t(), sq.get_mpz_t())) {
            n /= sq;
            s *= p;
        }
        if (n < sq) break;
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return std::make_pair(s * r, mpz_class(1));
    }
    // no prime factor <= 1e4 twice; below 1e12 that certifies square-freeness
    if (n > mpz_class("1000000000000")) return std::nullopt;
    return std::make_pair(s, n);
}

inline std::optional<QuadExt> quad_eval(const ExprNode& e) {
    auto bin = [&](const ExprNode& n) -> std::optional<std::pair<QuadExt, QuadExt>> {
        auto l = quad_eval(*n.lhs);
        if (!l) return std::nullopt;
        auto r = quad_eval(*n.rhs);
        if (!r) return std::nullopt;
        return std::make_pair(*l, *r);
    };
    try {
        switch (e.kind) {
        case ExprKind::Rat:
            return QuadExt(e.value);
        case ExprKind::Add:
            if (auto p = bin(e)) return p->first + p->second;
            return std::nullopt;
        case ExprKind::Sub:
            if (auto p = bin(e)) return p->first - p->second;
            return std::nullopt;
        case ExprKind::Mul:
            if (auto p = bin(e)) return p->first * p->second;
            return std::nullopt;
        case ExprKind::Div:
            if (auto p = bin(e)) return p->first / p->second;
            return std::nullopt;
        case ExprKind::Neg:
            if (auto v = quad_eval(*e.lhs)) return -*v;
            return std::nullopt;
        case ExprKind::Sqrt: {
            auto v = quad_eval(*e.lhs);
            if (!v || !v->is_rational()) return std::nullopt;
            const Rational& r = v->a;
            if (r.sign() < 0) return std::nullopt;
            if (r.is_zero()) return QuadExt(Rational(0));
            // sqrt(p/q) = sqrt(p*q)/q
            auto sf = split_square(r.num() * r.den());
            if (!sf) return std::nullopt;
            auto [s, d] = *sf;
            Rational coeff(s, r.den());
            if (d == 1) return QuadExt(coeff);
            if (!d.fits_slong_p()) return std::nullopt;
            return QuadExt(Rational(0), coeff, d.get_si());
        }
        case ExprKind::Cbrt: {
            auto v = quad_eval(*e.lhs);
            if (!v || !v->is_rational()) return std::nullopt;
            mpz_class n3 = v->a.num(), d3 = v->a.den();
            mpz_class rn, rd;
            if (mpz_root(rn.get_mpz_t(), n3.get_mpz_t(), 3) &&
                mpz_root(rd.get_mpz_t(), d3.get_mpz_t(), 3))
                return QuadExt(Rational(rn, rd));
            return std::nullopt;
        }
        case ExprKind::Root:
            return std::nullopt;
        }
    } catch (const std::invalid_argument&) { // field mismatch
        return std::nullopt;
    } catch (const std::domain_error&) { // zero divisor
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace detail

/// Exact value as an element of one quadratic field (or the rationals),
/// when the expression stays inside such a field.
inline std::optional<QuadExt> try_quadext(const Expr& e) {
    if (!e) return std::nullopt;
    return detail::quad_eval(*e);
}

enum class Ordering { Less, Equal, Greater };

/// Orders two expression values. Equality is decided exactly when both values
/// live in a common quadratic field; otherwise the enclosures are refined up
/// to a 4096-bit cap and must separate.
inline Ordering certified_compare(const Expr& e1, const Expr& e2) {
    auto q1 = try_quadext(e1);
    auto q2 = try_quadext(e2);
    if (q1 && q2 && (q1->d == 0 || q2->d == 0 || q1->d == q2->d)) {
        int s = compare(*q1, *q2);
        return s < 0 ? Ordering::Less : s > 0 ? Ordering::Greater : Ordering::Equal;
    }
    for (mpfr_prec_t p = 64; p <= 4096; p *= 2) {
        Interval a = interval_eval(e1, p);
        Interval b = interval_eval(e2, p);
        if (a.disjoint_below(b)) return Ordering::Less;
        if (b.disjoint_below(a)) return Ordering::Greater;
    }
    throw UndecidedComparison(
        "certified_compare: enclosures still overlap at the 4096-bit precision cap");
}

// ---------------------------------------------------------------------------
// Textual form: (add (rat -11 64) (mul (rat 9 320) (sqrt 65)))

inline std::string to_sexpr(const Expr& e) {
    if (!e) throw std::invalid_argument("to_sexpr: empty expression");
    auto atom = [](const Rational& r) {
        return r.is_integer() ? r.str() : "(rat " + r.num().get_str() + " " + r.den().get_str() + ")";
    };
    switch (e->kind) {
    case ExprKind::Rat:
        return atom(e->value);
    case ExprKind::Add:
        return "(add " + to_sexpr(e->lhs) + " " + to_sexpr(e->rhs) + ")";
    case ExprKind::Sub:
        return "(sub " + to_sexpr(e->lhs) + " " + to_sexpr(e->rhs) + ")";
    case ExprKind::Mul:
        return "(mul " + to_sexpr(e->lhs) + " " + to_sexpr(e->rhs) + ")";
    case ExprKind::Div:
        return "(div " + to_sexpr(e->lhs) + " " + to_sexpr(e->rhs) + ")";
    case ExprKind::Neg:
        return "(neg " + to_sexpr(e->lhs) + ")";
    case ExprKind::Sqrt:
        return "(sqrt " + to_sexpr(e->lhs) + ")";
    case ExprKind::Cbrt:
        return "(cbrt " + to_sexpr(e->lhs) + ")";
    case ExprKind::Root: {
        std::string s = "(root (poly";
        for (const auto& c : e->poly.c) s += " " + (c.is_integer() ? c.str() : c.str());
        s += ") " + e->root_lo.str() + " " + e->root_hi.str() + ")";
        return s;
    }
    }
    throw std::logic_error("to_sexpr: unreachable");
}

namespace detail {

struct SexprParser {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        if (pos >= s.size()) throw std::invalid_argument("sexpr: unexpected end of input");
        return s[pos];
    }
    std::string token() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        if (start == pos) throw std::invalid_argument("sexpr: expected a token");
        return std::string(s.substr(start, pos - start));
    }
    void expect(char c) {
        if (peek() != c) throw std::invalid_argument(std::string("sexpr: expected '") + c + "'");
        ++pos;
    }

    Rational atom_rational() {
        if (peek() == '(') {
            ++pos;
            std::string head = token();
            if (head != "rat") throw std::invalid_argument("sexpr: expected (rat p q)");
            Rational n = Rational::from_string(token());
            Rational d = Rational::from_string(token());
            expect(')');
            return n / d;
        }
        return Rational::from_string(token());
    }

    Expr expr() {
        if (peek() != '(') return rat(Rational::from_string(token()));
        ++pos;
        std::string head = token();
        auto fold = [&](Expr (*op)(Expr, Expr)) {
            Expr acc = expr();
            Expr next = expr();
            acc = op(std::move(acc), std::move(next));
            while (peek() != ')') acc = op(std::move(acc), expr());
            expect(')');
            return acc;
        };
        if (head == "rat") {
            Rational n = Rational::from_string(token());
            Rational d = Rational::from_string(token());
            expect(')');
            return rat(n / d);
        }
        if (head == "add") return fold(&add);
        if (head == "sub") return fold(&sub);
        if (head == "mul") return fold(&mul);
        if (head == "div") return fold(&div);
        if (head == "neg") {
            Expr a = expr();
            expect(')');
            return neg(std::move(a));
        }
        if (head == "sqrt") {
            Expr a = expr();
            expect(')');
            return sqrt_of(std::move(a));
        }
        if (head == "cbrt") {
            Expr a = expr();
            expect(')');
            return cbrt_of(std::move(a));
        }
        if (head == "root") {
            expect('(');
            std::string ph = token();
            if (ph != "poly") throw std::invalid_argument("sexpr: root expects (poly ...)");
            std::vector<Rational> coeffs;
            while (peek() != ')') coeffs.push_back(atom_rational());
            expect(')');
            Rational lo = atom_rational();
            Rational hi = atom_rational();
            expect(')');
            return root_of(Poly(std::move(coeffs)), std::move(lo), std::move(hi));
        }
        throw std::invalid_argument("sexpr: unknown operator '" + head + "'");
    }
};

} // namespace detail

inline Expr parse_sexpr(std::string_view text) {
    detail::SexprParser p{text};
    Expr e = p.expr();
    if (!p.at_end()) throw std::invalid_argument("sexpr: trailing input");
    return e;
}

} // namespace heilbronn::exact
