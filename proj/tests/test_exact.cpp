#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "heilbronn/algebraic.hpp"
#include "heilbronn/interval.hpp"
#include "heilbronn/polynomial.hpp"
#include "heilbronn/quadext.hpp"
#include "heilbronn/rational.hpp"

using namespace heilbronn::exact;

TEST_CASE("rational basics") {
    Rational r(2, 4);
    CHECK(r.num() == 1);
    CHECK(r.den() == 2);
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK(Rational(1, -2).den() == 2);
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);

    CHECK(Rational::from_string("7/341") == Rational(7, 341));
    CHECK(Rational::from_string("-0.964815") == Rational(-964815, 1000000));
    CHECK(Rational::from_string("42") == Rational(42));
    CHECK(Rational(5, 3).str() == "5/3");
}

TEST_CASE("polynomial arithmetic and gcd") {
    Poly p = Poly::from_longs({-1, 0, 1});  // x^2 - 1
    Poly q = Poly::from_longs({1, 1});      // x + 1
    auto [quot, rem] = divrem(p, q);
    CHECK(rem.is_zero());
    CHECK(quot.c == Poly::from_longs({-1, 1}).c);

    Poly g = gcd(p, q);
    CHECK(g.degree() == 1);
    CHECK(g.eval(Rational(-1)).is_zero());

    Poly sq = p * p;
    CHECK(squarefree_part(sq).degree() == 2);
}

TEST_CASE("sturm isolation on the feasibility cubic") {
    Poly cubic = Poly::from_longs({-1, 11, -27, 19});
    auto roots = sturm_isolate(cubic);
    REQUIRE(roots.size() == 3);
    const double expected[3] = {0.1269, 0.5839, 0.7103};
    for (int m = 0; m < 3; ++m) {
        auto iv = refine_interval(roots[m], Rational(1, 1 << 20));
        CHECK_THAT(iv.midpoint(), Catch::Matchers::WithinAbs(expected[m], 1e-3));
    }
}

TEST_CASE("sturm isolation degenerate cases") {
    auto two = sturm_isolate(Poly::from_longs({-2, 0, 1})); // x^2 - 2
    REQUIRE(two.size() == 2);
    CHECK_THAT(refine_interval(two[0], Rational(1, 1 << 20)).midpoint(),
               Catch::Matchers::WithinAbs(-std::sqrt(2.0), 1e-5));
    CHECK_THAT(refine_interval(two[1], Rational(1, 1 << 20)).midpoint(),
               Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-5));

    CHECK(sturm_isolate(Poly::from_longs({1, 0, 1})).empty()); // x^2 + 1
    CHECK_THROWS_AS(sturm_isolate(Poly()), std::invalid_argument);
}

TEST_CASE("sturm isolation matches known integer roots") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<long> roots;
        int deg = 3 + static_cast<int>(rng() % 2);
        while (static_cast<int>(roots.size()) < deg) {
            long r = static_cast<long>(rng() % 11) - 5;
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
        Poly p = Poly::from_longs({1});
        for (long r : roots) p = p * Poly::from_longs({-r, 1});
        auto isolated = sturm_isolate(p);
        REQUIRE(isolated.size() == roots.size());
        std::sort(roots.begin(), roots.end());
        for (size_t m = 0; m < roots.size(); ++m) {
            CHECK(isolated[m].lo < Rational(roots[m]));
            CHECK(Rational(roots[m]) < isolated[m].hi);
        }
    }
}

TEST_CASE("quadratic field arithmetic") {
    QuadExt u(Rational(-1, 36), Rational(1, 36), 13);
    QuadExt v = u * QuadExt(Rational(36));
    CHECK(v == QuadExt(Rational(-1), Rational(1), 13));

    // norm identity: (a + b sqrt(d))(a - b sqrt(d)) = a^2 - d b^2
    QuadExt w(Rational(3, 7), Rational(2, 5), 65);
    QuadExt conj(Rational(3, 7), Rational(-2, 5), 65);
    QuadExt prod = w * conj;
    CHECK(prod.is_rational());
    CHECK(prod.a == Rational(3, 7) * Rational(3, 7) - Rational(65) * Rational(2, 5) * Rational(2, 5));

    QuadExt delta9(Rational(-11, 64), Rational(9, 320), 65);
    CHECK_THAT(delta9.to_double(), Catch::Matchers::WithinAbs(0.0548759991708967, 1e-13));
    CHECK(delta9.sign() == 1);

    CHECK_THROWS_AS(QuadExt(Rational(0), Rational(1), 2) + QuadExt(Rational(0), Rational(1), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(inverse(QuadExt(Rational(0))), std::domain_error);
    CHECK_THROWS_AS(QuadExt(Rational(0), Rational(1), 12), std::invalid_argument); // 12 = 4*3
}

TEST_CASE("interval evaluation of closed forms") {
    Expr s39 = div(sqrt_of(rat(3)), rat(9));
    Interval enc = interval_eval(s39, 64);
    CHECK_THAT(enc.mid_double(), Catch::Matchers::WithinAbs(0.19245008972987525, 1e-16));
    CHECK(enc.width_double() < 1e-15);

    Expr r = rat(Rational(7, 341));
    Interval re = interval_eval(r, 64);
    CHECK(re.contains(Rational(7, 341)));
    CHECK(re.width_double() < 1e-17);

    Expr f = root_of(Poly::from_longs({-1, 11, -27, 19}), Rational(1, 2), Rational(3, 5));
    Interval fe = interval_eval(f, 64);
    CHECK_THAT(fe.mid_double(), Catch::Matchers::WithinAbs(0.5839, 1e-4));
    CHECK(fe.width_double() < 1e-18);
}

TEST_CASE("interval domain errors") {
    CHECK_THROWS_AS(interval_eval(sqrt_of(rat(-1)), 64), EvalDomainError);
    // denominator encloses zero at every precision
    Expr zero = sub(sqrt_of(rat(2)), sqrt_of(rat(2)));
    CHECK_THROWS_AS(interval_eval(div(rat(1), zero), 64), EvalDomainError);
}

TEST_CASE("enclosure soundness on random rational trees") {
    std::mt19937_64 rng(31);
    auto rnd_rat = [&]() {
        long num = static_cast<long>(rng() % 41) - 20;
        long den = 1 + static_cast<long>(rng() % 12);
        return Rational(num, den);
    };
    for (int trial = 0; trial < 300; ++trial) {
        Rational value = rnd_rat();
        Expr e = rat(value);
        for (int depth = 0; depth < 6; ++depth) {
            Rational other = rnd_rat();
            switch (rng() % 4) {
            case 0: e = add(e, rat(other)); value += other; break;
            case 1: e = sub(e, rat(other)); value -= other; break;
            case 2: e = mul(e, rat(other)); value *= other; break;
            default:
                if (other.is_zero()) other = Rational(1, 3);
                e = div(e, rat(other));
                value /= other;
            }
        }
        CHECK(interval_eval(e, 64).contains(value));
    }
}

TEST_CASE("monotone refinement") {
    std::vector<Expr> exprs = {
        div(sqrt_of(rat(3)), rat(9)),
        add(rat(Rational(-11, 64)), mul(rat(Rational(9, 320)), sqrt_of(rat(65)))),
        root_of(Poly::from_longs({-1, 11, -27, 19}), Rational(1, 2), Rational(3, 5)),
        cbrt_of(add(rat(63), mul(rat(8), sqrt_of(rat(62))))),
    };
    for (const auto& e : exprs)
        for (mpfr_prec_t p = 24; p <= 128; p += 8) {
            Interval coarse = interval_eval(e, p);
            Interval fine = interval_eval(e, p + 8);
            CHECK(coarse.contains(fine));
        }
}

TEST_CASE("quadext agrees with interval evaluation") {
    std::mt19937_64 rng(37);
    const long fields[] = {2, 3, 5, 13, 65};
    for (int trial = 0; trial < 1000; ++trial) {
        long d = fields[rng() % 5];
        Rational a(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 9));
        Rational b(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 9));
        QuadExt q1(a, b, d);
        QuadExt q2(b, a, d);
        QuadExt sum = q1 * q2 + q1;
        Interval direct = sum.to_interval(96);
        Interval via_expr = interval_eval(add(mul(from_quadext(q1), from_quadext(q2)),
                                              from_quadext(q1)), 96);
        CHECK(std::fabs(direct.mid_double() - via_expr.mid_double()) <=
              direct.width_double() + via_expr.width_double() + 1e-300);
    }
}

TEST_CASE("certified comparison") {
    Expr s39 = div(sqrt_of(rat(3)), rat(9));
    CHECK(certified_compare(s39, rat(Rational(1, 8))) == Ordering::Greater);

    Expr lhs = div(sub(sqrt_of(rat(13)), rat(1)), rat(36));
    Expr rhs = add(rat(Rational(-1, 36)), mul(rat(Rational(1, 36)), sqrt_of(rat(13))));
    CHECK(certified_compare(lhs, rhs) == Ordering::Equal);

    // spurious vs true value, equal to five digits
    Expr spurious = add(rat(Rational(19, 166)), mul(rat(Rational(3, 166)), sqrt_of(rat(65))));
    Expr truth = sub(rat(Rational(9, 16)), mul(rat(Rational(3, 80)), sqrt_of(rat(65))));
    CHECK(certified_compare(spurious, truth) == Ordering::Less);

    // genuinely equal values in different radical forms stay undecided
    Expr sixA = mul(sqrt_of(rat(2)), sqrt_of(rat(3)));
    Expr sixB = sqrt_of(rat(6));
    CHECK_THROWS_AS(certified_compare(sixA, sixB), UndecidedComparison);
}

TEST_CASE("root tagging is validated") {
    Poly p = Poly::from_longs({-2, 0, 1});
    CHECK_NOTHROW(root_of(p, Rational(0), Rational(2)));
    CHECK_THROWS_AS(root_of(p, Rational(-2), Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(root_of(Poly(), Rational(0), Rational(1)), std::invalid_argument);
}

TEST_CASE("sexpr round trip") {
    std::string text = "(add (rat -11 64) (mul (rat 9 320) (sqrt 65)))";
    Expr e = parse_sexpr(text);
    CHECK_THAT(to_double(e), Catch::Matchers::WithinAbs(0.0548759991708967, 1e-13));
    Expr again = parse_sexpr(to_sexpr(e));
    CHECK(certified_compare(e, again) == Ordering::Equal);

    Expr f = parse_sexpr("(root (poly -1 11 -27 19) 1/2 3/5)");
    CHECK_THAT(to_double(f), Catch::Matchers::WithinAbs(0.5839, 1e-4));
    Expr f2 = parse_sexpr(to_sexpr(f));
    CHECK_THAT(to_double(f2), Catch::Matchers::WithinAbs(to_double(f), 1e-15));

    CHECK_THROWS_AS(parse_sexpr("(frob 1 2)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sexpr("(add 1"), std::invalid_argument);
}
