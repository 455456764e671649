#include <catch2/catch.hpp>

#include "betadyn/automaton.hpp"
#include "betadyn/beta.hpp"
#include "betadyn/shift.hpp"

using namespace betadyn;

static BetaContext silver_ctx() { return make_beta_context(parse_associated("x^2+2x-1")); }

TEST_CASE("beta context selection") {
    auto c1 = silver_ctx();  // beta = 1 + sqrt 2
    CHECK(c1.digit_cap == 2);
    CHECK(c1.beta_integral);
    CHECK(abs(c1.beta_real(96) - 2.41421356237309) < 1e-12);

    auto c2 = make_beta_context(parse_associated("2x-1"));  // beta = 2
    CHECK(c2.digit_cap == 1);
    CHECK(c2.beta == c2.F->from_rat(2));

    auto c3 = make_beta_context(parse_associated("2x-3"));  // beta = 3/2, rational
    CHECK(c3.digit_cap == 1);
    CHECK_FALSE(c3.beta_integral);
    CHECK(c3.beta == c3.F->from_rat(Rat(3, 2)));

    auto c4 = make_beta_context(parse_associated("2x^2+3x-1"));  // (3+sqrt 17)/2
    CHECK(c4.digit_cap == 3);

    CHECK_THROWS_AS(make_beta_context(parse_associated("x^2-x+1")), Error);
}

TEST_CASE("parry data of the worked examples") {
    SECTION("beta = 2") {
        auto pd = parry_data(make_beta_context(parse_associated("2x-1")));
        CHECK(pd.d1_finite);
        CHECK(pd.d1 == std::vector<long>{2});
        CHECK(pd.dstar_pre.empty());
        CHECK(pd.dstar_period == std::vector<long>{1});
    }
    SECTION("beta = 1 + sqrt 2") {
        auto pd = parry_data(silver_ctx());
        CHECK(pd.d1_finite);
        CHECK(pd.d1 == std::vector<long>{2, 1});
        CHECK(pd.dstar_period == std::vector<long>{2, 0});
    }
    SECTION("beta = (3+sqrt 17)/2") {
        auto pd = parry_data(make_beta_context(parse_associated("2x^2+3x-1")));
        CHECK(pd.d1_finite);
        CHECK(pd.d1 == std::vector<long>{3, 2});
        CHECK(pd.dstar_period == std::vector<long>{3, 1});
    }
    SECTION("beta = 3/2 is not eventually periodic") {
        CHECK_THROWS_AS(parry_data(make_beta_context(parse_associated("2x-3")), 512), Error);
    }
    SECTION("d* evaluates to 1 exactly") {
        for (const char* s : {"2x-1", "x^2+2x-1", "2x^2+3x-1"}) {
            auto ctx = make_beta_context(parse_associated(s));
            auto pd = parry_data(ctx);
            CHECK(dstar_value(pd, ctx) == ctx.F->one());
        }
    }
}

TEST_CASE("admissibility (Parry criterion)") {
    auto ctx = silver_ctx();
    auto pd = parry_data(ctx);
    CHECK(is_admissible({2, 0, 2, 0}, pd));
    CHECK_FALSE(is_admissible({2, 2}, pd));
    CHECK_FALSE(is_admissible({2, 1}, pd));  // d(1) itself is not an inner factor
    CHECK(is_admissible({1, 1, 1, 1}, pd));
    CHECK(is_admissible({}, pd));
    CHECK_THROWS_AS(is_admissible({3}, pd), Error);

    // full shift at beta = 2
    auto pd2 = parry_data(make_beta_context(parse_associated("2x-1")));
    for (long w = 0; w < 16; ++w)
        CHECK(is_admissible({(w >> 3) & 1, (w >> 2) & 1, (w >> 1) & 1, w & 1}, pd2));
}

TEST_CASE("greedy expansion and evaluation") {
    auto ctx = silver_ctx();
    auto pd = parry_data(ctx);

    SECTION("zero") {
        auto g = greedy_expand(ctx.F->zero(), ctx);
        CHECK(g.digits.is_zero());
        CHECK(g.exact);
    }
    SECTION("1/beta") {
        auto g = greedy_expand(ctx.beta_inv, ctx);
        CHECK(g.exact);
        CHECK(g.digits.digits == std::vector<long>{1});
        CHECK(g.digits.start_exponent == 1);
        CHECK(g.digits.to_string() == ".1");
        CHECK(eval_digits(g.digits, ctx) == ctx.beta_inv);
    }
    SECTION("4/beta = 1.111") {
        NfElem x = Rat(4) * ctx.beta_inv;
        auto g = greedy_expand(x, ctx);
        CHECK(g.exact);
        CHECK(g.digits.to_string() == "1.111");
        CHECK(eval_digits(g.digits, ctx) == x);
        CHECK(abs(x.real_value(96) - 1.6568542494923806) < 1e-12);
    }
    SECTION("greedy output is admissible") {
        Rng rng(41);
        for (int t = 0; t < 50; ++t) {
            // random element of [0, 4) in Z[beta]/beta^3
            NfElem x = ctx.F->zero();
            for (long i = -1; i <= 3; ++i)
                x = x + Rat(rng.range(0, 2)) * ctx.beta_inv.pow(i);
            auto g = greedy_expand(x, ctx, 48);
            CHECK(is_admissible(g.digits.digits, pd));
        }
    }
    SECTION("round trip with exact remainder bound") {
        Rng rng(99);
        for (int t = 0; t < 60; ++t) {
            // random x in [0, 1): fractional part of a random ring element
            NfElem x = ctx.F->zero();
            for (long i = 0; i <= 4; ++i)
                x = x + Rat(rng.range(0, 3)) * ctx.beta_inv.pow(i + 1);
            Int fl = x.floor();
            x = x - ctx.F->from_rat(Rat(fl));
            auto g = greedy_expand(x, ctx, 48);
            // x - eval = remainder, and remainder < beta^-48
            CHECK(eval_digits(g.digits, ctx) + g.remainder == x);
            CHECK((g.remainder - ctx.beta_inv.pow(48)).sign() < 0);
            CHECK(g.remainder.sign() >= 0);
        }
    }
    SECTION("digit string round trip") {
        auto bd = BetaDigits::parse("102.0021");
        CHECK(bd.to_string() == "102.0021");
        CHECK(BetaDigits::parse(".1").start_exponent == 1);
        CHECK(BetaDigits::parse("20.").end_exponent() == -1);  // trailing zero stripped
    }
}

TEST_CASE("fin_add") {
    auto ctx = silver_ctx();
    SECTION(".1 + .1 = .2 with no carry") {
        auto one = BetaDigits::parse(".1");
        auto r = fin_add(one, one, ctx);
        CHECK(r.sum.to_string() == ".2");
        CHECK(r.left_span == 0);
        CHECK(r.right_span == 0);
    }
    SECTION(".2 + .2 = 1.111 with carry (1 left, 2 right)") {
        auto two = BetaDigits::parse(".2");
        auto r = fin_add(two, two, ctx);
        CHECK(r.sum.to_string() == "1.111");
        CHECK(r.left_span == 1);
        CHECK(r.right_span == 2);
        CHECK(r.carry_span() == 2);
    }
    SECTION("a + 0 = a") {
        auto a = BetaDigits::parse("2.01");
        auto r = fin_add(a, BetaDigits{}, ctx);
        CHECK(r.sum.to_string() == "2.01");
        CHECK(r.carry_span() == 0);
    }
    SECTION("exactness: eval(sum) = eval(a) + eval(b) with zero tolerance") {
        Rng rng(5);
        auto pd = parry_data(ctx);
        for (int t = 0; t < 40; ++t) {
            NfElem xa = ctx.F->zero(), xb = ctx.F->zero();
            for (long i = 0; i <= 3; ++i) {
                xa = xa + Rat(rng.range(0, 2)) * ctx.beta_inv.pow(i);
                xb = xb + Rat(rng.range(0, 2)) * ctx.beta_inv.pow(i);
            }
            auto ga = greedy_expand(xa, ctx, 128);
            auto gb = greedy_expand(xb, ctx, 128);
            REQUIRE(ga.exact);
            REQUIRE(gb.exact);
            auto r = fin_add(ga.digits, gb.digits, ctx, 256);
            CHECK(eval_digits(r.sum, ctx) == xa + xb);
            CHECK(is_admissible(r.sum.digits, pd));
        }
    }
}

TEST_CASE("finitary classification") {
    CHECK(finitary_sufficient(parse_associated("x^2-2x-1")));
    CHECK(finitary_sufficient(parse_associated("x^2-3x-2")));
    CHECK(finitary_sufficient(parse_associated("x-2")));
    CHECK_FALSE(finitary_sufficient(parse_associated("x^3-x^2-1")));   // gap in the chain
    CHECK_FALSE(finitary_sufficient(parse_associated("x^2-2x+1")));    // positive a_0 side
    CHECK_FALSE(finitary_sufficient(parse_associated("x^3-2x^2+x-1")));

    SECTION("empirical runs pass on finitary bases") {
        auto r1 = finitary_empirical(silver_ctx(), 60, 64, 1);
        CHECK(r1.pass);
        CHECK(r1.failures == 0);
        CHECK(r1.empirical_gap() >= 0);

        auto r2 = finitary_empirical(make_beta_context(parse_associated("2x-1")), 60, 64, 2);
        CHECK(r2.pass);
        CHECK(r2.empirical_gap() <= 1);
    }
    SECTION("a finitary base outside the sufficient test") {
        // x^3 - 2x^2 + x - 1: Pisot unit, d(1) = 1101 finite, fails the
        // descending-coefficient test but adds finitely in practice
        auto f = parse_associated("x^3-2x^2+x-1");
        CHECK_FALSE(finitary_sufficient(f));
        auto ctx = make_beta_context(f);
        auto pd = parry_data(ctx);
        CHECK(pd.d1_finite);
        CHECK(pd.d1 == std::vector<long>{1, 1, 0, 1});
        auto rep = finitary_empirical(ctx, 40, 96, 3);
        CHECK(rep.pass);
    }
}

TEST_CASE("parry automaton") {
    SECTION("beta = 2: one state, full shift") {
        auto pd = parry_data(make_beta_context(parse_associated("2x-1")));
        auto aut = build_automaton(pd);
        CHECK(aut.states() == 1);
        CHECK(aut.accepts({0, 1, 1, 0, 1}));
    }
    SECTION("beta = 1+sqrt 2: two states") {
        auto ctx = silver_ctx();
        auto pd = parry_data(ctx);
        auto aut = build_automaton(pd);
        CHECK(aut.states() == 2);
        CHECK(aut.accepts({2, 0, 2, 0}));
        CHECK_FALSE(aut.accepts({2, 1}));
        CHECK_FALSE(aut.accepts({2, 2}));
    }
    SECTION("beta = (3+sqrt 17)/2: two states, finite type") {
        auto ctx = make_beta_context(parse_associated("2x^2+3x-1"));
        auto pd = parry_data(ctx);
        auto aut = build_automaton(pd);
        CHECK(aut.states() == 2);
        CHECK(pd.d1_finite);  // subshift of finite type
        CHECK(aut.accepts({3, 1, 1}));
        CHECK_FALSE(aut.accepts({3, 2}));
        CHECK_FALSE(aut.accepts({3, 3}));
    }
    SECTION("automaton language = admissible words, all lengths <= 8") {
        for (const char* s : {"2x-1", "x^2+2x-1", "2x^2+3x-1", "x^3-2x^2+x-1"}) {
            auto ctx = make_beta_context(parse_associated(s));
            auto pd = parry_data(ctx);
            auto aut = build_automaton(pd);
            long a = pd.digit_cap + 1;
            std::vector<long> w;
            std::function<void(int)> rec = [&](int len) {
                if (len > 0) {
                    CHECK(aut.accepts(w) == is_admissible(w, pd));
                }
                if (len == 8) return;
                for (long d = 0; d < a; ++d) {
                    w.push_back(d);
                    rec(len + 1);
                    w.pop_back();
                }
            };
            rec(0);
        }
    }
}

TEST_CASE("error paths: caps are reported, never guessed around") {
    auto ctx = silver_ctx();
    SECTION("fin_add depth cap raises NonTerminating") {
        auto two = BetaDigits::parse(".2");
        bool threw = false;
        try {
            fin_add(two, two, ctx, 1);  // true sum 1.111 needs depth 3
        } catch (const Error& e) {
            threw = e.code == Errc::non_terminating;
        }
        CHECK(threw);
    }
    SECTION("odometer search cap") {
        auto pd = parry_data(ctx);
        BetaDigits two;
        two.digits = {2};
        two.start_exponent = 0;
        bool threw = false;
        try {
            odometer_successor(two, ctx, pd, 0);  // successor needs a longer word
        } catch (const Error& e) {
            threw = e.code == Errc::search_cap_exceeded;
        }
        CHECK(threw);
    }
}

TEST_CASE("a non-finitary Pisot base is reported, not forced") {
    // beta = (3+sqrt 5)/2, d(1) = 2 1 1 1 ... is infinite
    auto ctx = make_beta_context(parse_associated("x^2-3x+1"));
    auto pd = parry_data(ctx);
    CHECK_FALSE(pd.d1_finite);
    CHECK(pd.dstar_pre == std::vector<long>{2});
    CHECK(pd.dstar_period == std::vector<long>{1});
    CHECK_FALSE(finitary_sufficient(parse_associated("x^2-3x+1")));
}
