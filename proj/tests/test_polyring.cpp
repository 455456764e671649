#include <catch2/catch.hpp>

#include "betadyn/laurent.hpp"
#include "betadyn/polyring.hpp"
#include "betadyn/qpoly.hpp"
#include "betadyn/roots.hpp"

using namespace betadyn;

static AssociatedPoly ap(const std::string& s) { return parse_associated(s); }

TEST_CASE("laurent parsing") {
    auto p = parse_laurent("x^2+2x-1");
    CHECK(p.coeff(2) == 1);
    CHECK(p.coeff(1) == 2);
    CHECK(p.coeff(0) == -1);

    auto q = parse_laurent("x^-1+2-x^-2");
    CHECK(q.coeff(-1) == 1);
    CHECK(q.coeff(0) == 2);
    CHECK(q.coeff(-2) == -1);

    auto r = parse_laurent("[-1,2,1]");
    CHECK(r == p);

    CHECK(parse_laurent("2*x - 3").coeff(1) == 2);
    CHECK_THROWS_AS(parse_laurent(""), Error);
    CHECK_THROWS_AS(parse_laurent("x^"), Error);
    CHECK_THROWS_AS(parse_laurent("2+"), Error);
}

TEST_CASE("normalize_associated applies the three normalization conditions") {
    // unit multiples x^k and -1 only; content divided out
    auto a = normalize_associated(parse_laurent("-2x^3+x^2"));
    // -2x^3 + x^2 = x^2 (1 - 2x); normalized generator is 2x - 1
    CHECK(a.coeffs() == std::vector<Int>{-1, 2});

    auto b = normalize_associated(parse_laurent("4x-2"));
    CHECK(b.coeffs() == std::vector<Int>{-1, 2});

    auto c = normalize_associated(parse_laurent("x^-1+2-x^-2"));
    // x^-2 (2x^2 + x - 1)
    CHECK(c.coeffs() == std::vector<Int>{-1, 1, 2});

    CHECK_THROWS_AS(normalize_associated(IntLaurentPoly()), Error);

    // idempotent
    CHECK(normalize_associated(a.to_laurent()) == a);
    CHECK(normalize_associated(c.to_laurent()) == c);
}

TEST_CASE("reciprocal_poly is involutive") {
    auto f = ap("x^2+2x-1");
    auto r = reciprocal_poly(f);
    CHECK(r.coeffs() == std::vector<Int>{-1, -2, 1});  // x^2 - 2x - 1
    CHECK(reciprocal_poly(r) == f);

    CHECK(reciprocal_poly(ap("2x-1")).coeffs() == std::vector<Int>{-2, 1});  // x - 2
    auto pal = ap("x^2-3x+1");
    CHECK(reciprocal_poly(pal) == pal);
}

TEST_CASE("qpoly division and gcd") {
    QPoly a(std::vector<Rat>{Rat(-1), Rat(0), Rat(1)});  // x^2 - 1
    QPoly b(std::vector<Rat>{Rat(1), Rat(1)});           // x + 1
    auto [q, r] = qpoly_divmod(a, b);
    CHECK(r.is_zero());
    CHECK(q.c == std::vector<Rat>{Rat(-1), Rat(1)});
    CHECK(qpoly_gcd(a, b).c == std::vector<Rat>{Rat(1), Rat(1)});
}

TEST_CASE("sturm count") {
    // (x^2 - 2)(x^2 - 3) has all four real roots in (-2, 2)
    QPoly p(std::vector<Rat>{Rat(6), Rat(0), Rat(-5), Rat(0), Rat(1)});
    CHECK(sturm_count_open(p, Rat(-2), Rat(2)) == 4);
    CHECK(sturm_count_open(p, Rat(0), Rat(2)) == 2);
    QPoly c(std::vector<Rat>{Rat(1), Rat(0), Rat(1)});  // x^2 + 1
    CHECK(sturm_count_open(c, Rat(-2), Rat(2)) == 0);
}

TEST_CASE("root isolation certifies rational and irrational roots") {
    auto rs = isolate_roots(ap("x^2-2x-1"), 128);
    REQUIRE(rs.roots.size() == 2);
    // roots 1 - sqrt(2) < 0 < 1 + sqrt(2), sorted by real part
    CHECK(rs.roots[0].is_real());
    CHECK(rs.roots[1].is_real());
    Rat lo = rs.roots[1].re - rs.roots[1].rad, hi = rs.roots[1].re + rs.roots[1].rad;
    CHECK(lo < Rat(24142136, 10000000));
    CHECK(hi > Rat(24142135, 10000000));

    auto rs2 = isolate_roots(ap("2x-1"), 128);
    REQUIRE(rs2.roots.size() == 1);
    CHECK(rs2.roots[0].exact);
    CHECK(rs2.roots[0].re == Rat(1, 2));

    // x^2 - x + 1: conjugate pair of modulus exactly 1
    auto rs3 = isolate_roots(ap("x^2-x+1"), 128);
    REQUIRE(rs3.roots.size() == 2);
    for (const auto& b : rs3.roots) {
        auto [l, h] = b.modulus_sq_bounds();
        CHECK(l <= 1);
        CHECK(h >= 1);
        CHECK(!b.is_real());
    }

    // repeated factor: (x-1)^2 (2x-1)
    auto rs4 = isolate_roots(normalize_associated(
                                 parse_laurent("2x^3-5x^2+4x-1")),
                             96);
    int with_mult = 0;
    for (const auto& b : rs4.roots) with_mult += b.mult;
    CHECK(with_mult == 3);
}

TEST_CASE("inverse laurent expansion of 1/f") {
    // f = 2x - 1: coefficient of x^-n is 2^-n, n >= 1
    auto w = inverse_laurent_coeffs(ap("2x-1"), -5, 5, 128);
    for (long n = 1; n <= 5; ++n) {
        Real expect = real_with_prec(128);
        expect = 1;
        mpf_div_2exp(expect.get_mpf_t(), expect.get_mpf_t(), (mp_bitcnt_t)n);
        Real got = w.coeff(-n);
        Real err = abs(got - expect);
        CHECK(err < 1e-30);
    }
    for (long n = 0; n <= 5; ++n) {
        CHECK(abs(w.coeff(n)) < 1e-30);
    }

    // defining property: f * w = 1 on the window interior
    auto conv_err = convolve_check(ap("2x-1"), w);
    CHECK(conv_err < 1e-25);

    auto w2 = inverse_laurent_coeffs(ap("x^2+2x-1"), -12, 12, 192);
    auto conv_err2 = convolve_check(ap("x^2+2x-1"), w2);
    CHECK(conv_err2 < 1e-20);
    // decay like 0.4143^|n|
    Real ratio = abs(w2.coeff(8)) / abs(w2.coeff(7));
    CHECK(abs(ratio - 0.41421356) < 1e-4);
    Real ration = abs(w2.coeff(-8)) / abs(w2.coeff(-7));
    CHECK(abs(ration - 0.41421356) < 1e-4);

    CHECK_THROWS_AS(inverse_laurent_coeffs(ap("x^2-x+1"), -4, 4, 96), Error);
}

TEST_CASE("digit_reduce: floor reduction against B(N)") {
    auto f = ap("2x-1");  // N = 3
    SECTION("g = 5") {
        auto dr = digit_reduce(parse_laurent("5"), f);
        CHECK(dr.complete);
        CHECK(dr.h.coeff(-1) == 2);
        CHECK(dr.h.coeff(-2) == 1);
        CHECK(dr.r.coeff(0) == 1);
        CHECK(dr.r.coeff(-2) == 1);
        CHECK(f.to_laurent() * dr.h + dr.r == parse_laurent("5"));
    }
    SECTION("g = 0") {
        auto dr = digit_reduce(IntLaurentPoly(), f);
        CHECK(dr.complete);
        CHECK(dr.h.is_zero());
        CHECK(dr.r.is_zero());
    }
    SECTION("g = x^2") {
        auto dr = digit_reduce(parse_laurent("x^2"), f);
        CHECK(dr.complete);
        CHECK(dr.h.is_zero());
        CHECK(dr.r == parse_laurent("x^2"));
    }
    SECTION("exact identity and bounded remainder on random inputs") {
        Rng rng(7);
        for (int trial = 0; trial < 40; ++trial) {
            std::map<long, Int> m;
            for (int t = 0; t < 4; ++t) m[rng.range(-3, 3)] = rng.range(-9, 9);
            auto g = IntLaurentPoly::from_map(m);
            auto dr = digit_reduce(g, f);
            CHECK(f.to_laurent() * dr.h + dr.r == g);
            if (dr.complete) {
                Int n = f.coeff_abs_sum();
                for (const auto& [e, c] : dr.r.terms()) {
                    CHECK(c >= 0);
                    CHECK(c < n);
                }
            }
        }
    }
}

TEST_CASE("mahler entropy") {
    Real e1 = mahler_entropy(ap("2x-3"), 160);
    CHECK(abs(e1 - 1.0986122886681098) < 1e-12);  // log 3
    Real e2 = mahler_entropy(ap("x-1"), 160);
    CHECK(abs(e2) < 1e-30);
    Real e3 = mahler_entropy(ap("x^2-2x-1"), 160);
    CHECK(abs(e3 - 0.8813735870195430) < 1e-12);  // log(1+sqrt 2)

    // invariance under reciprocal
    for (const char* s : {"2x-3", "x^2+2x-1", "2x^2+3x-1"}) {
        Real a = mahler_entropy(ap(s), 160);
        Real b = mahler_entropy(reciprocal_poly(ap(s)), 160);
        CHECK(abs(a - b) < 1e-30);
    }
}

TEST_CASE("digit_reduce exact identity for a quadratic modulus") {
    auto f = ap("x^2+2x-1");
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        std::map<long, Int> m;
        for (int t = 0; t < 3; ++t) m[rng.range(-2, 2)] = rng.range(-6, 6);
        auto g = IntLaurentPoly::from_map(m);
        auto dr = digit_reduce(g, f);
        CHECK(f.to_laurent() * dr.h + dr.r == g);
        if (dr.complete) {
            Int n = f.coeff_abs_sum();
            for (const auto& [e, c] : dr.r.terms()) {
                CHECK(c >= 0);
                CHECK(c < n);
            }
        }
    }
}
