#include <catch2/catch.hpp>

#include "betadyn/numberfield.hpp"

using namespace betadyn;

static std::shared_ptr<const NumberField> silver() {
    return NumberField::create(parse_associated("x^2-2x-1"));  // theta = 1+sqrt 2
}

TEST_CASE("field arithmetic in Q(1+sqrt 2)") {
    auto F = silver();
    NfElem th = F->theta();
    // theta^2 = 2 theta + 1
    CHECK(th * th == Rat(2) * th + F->one());
    // theta * theta^-1 = 1
    CHECK(th * F->theta_inv() == F->one());
    CHECK(th.pow(5) * th.pow(-5) == F->one());
    // (theta - 2) = 1/theta exactly
    CHECK(th - F->from_rat(2) == F->theta_inv());

    NfElem z = F->from_coords({Rat(3, 2), Rat(-1, 3)});
    CHECK(z * z.inverse() == F->one());
    CHECK((z - z).is_zero());
}

TEST_CASE("signs, intervals and floors are exact") {
    auto F = silver();
    NfElem th = F->theta();  // 2.414213...
    CHECK(th.sign() > 0);
    CHECK(th.floor() == 2);
    CHECK((th - F->from_rat(3)).sign() < 0);
    CHECK((-th).floor() == -3);
    CHECK(F->from_rat(Rat(7, 2)).floor() == 3);
    CHECK(F->from_rat(3).floor() == 3);
    // floor of an exact integer value built irrationally: theta^2 - 2 theta = 1
    CHECK((th * th - Rat(2) * th).floor() == 1);

    auto [lo, hi] = th.interval(100);
    CHECK(hi - lo <= rat_pow(Rat(1, 2), 100));
    CHECK(lo < Rat(24142136, 10000000));
    CHECK(hi > Rat(24142135, 10000000));

    Real rv = th.real_value(128);
    CHECK(abs(rv - 2.4142135623730950488) < 1e-15);
}

TEST_CASE("ring membership in Z[theta, 1/theta]") {
    auto F = silver();  // unit case: ring = Z[sqrt 2]
    NfElem th = F->theta();
    CHECK(F->one().in_z_theta_laurent());
    CHECK(th.pow(-3).in_z_theta_laurent());
    CHECK((th.pow(2) - Rat(5) * th.pow(-1)).in_z_theta_laurent());
    CHECK_FALSE(F->from_rat(Rat(1, 2)).in_z_theta_laurent());
    CHECK_FALSE(F->from_coords({Rat(1, 3), Rat(0)}).in_z_theta_laurent());
    CHECK_FALSE(F->from_coords({Rat(0), Rat(1, 2)}).in_z_theta_laurent());

    // non-unit case: theta root of x^2 - 3x - 2 (the monic side of 2x^2+3x-1)
    auto G = NumberField::create(parse_associated("x^2-3x-2"));
    NfElem t = G->theta();
    // theta - 3 = 2/theta is in the ring
    CHECK((t - G->from_rat(3)).in_z_theta_laurent());
    // theta/2 is p-adically blocked at the place over 2 where theta is a unit
    CHECK_FALSE((Rat(1, 2) * t).in_z_theta_laurent());
    // (18 - 3 theta)/8: fractional orbit cycles without reaching integrality
    CHECK_FALSE(G->from_coords({Rat(18, 8), Rat(-3, 8)}).in_z_theta_laurent());
    CHECK(t.pow(-2).in_z_theta_laurent());
    CHECK(t.pow(-2).integral_coords() == false);

    // scale normal form
    auto [scale, coords] = (t.pow(-2) + t.pow(1)).theta_scaled_integers();
    CHECK(scale == 2);
    NfElem rebuilt = G->zero();
    NfElem tp = G->theta();
    for (size_t i = 0; i < coords.size(); ++i)
        rebuilt = rebuilt + Rat(coords[i]) * tp.pow((long)i);
    CHECK(rebuilt * tp.pow(-(long)scale) == t.pow(-2) + t.pow(1));
}

TEST_CASE("degree one field (rational arithmetic)") {
    auto F = NumberField::create(parse_associated("x-2"));
    NfElem two = F->theta();
    CHECK(two == F->from_rat(2));
    CHECK(F->from_rat(Rat(5, 4)).floor() == 1);
    CHECK(F->from_rat(Rat(-5, 4)).floor() == -2);
    CHECK(F->from_rat(Rat(3, 8)).in_z_theta_laurent());  // 3/8 in Z[1/2]
    CHECK_FALSE(F->from_rat(Rat(1, 3)).in_z_theta_laurent());
}

TEST_CASE("embeddings agree with direct evaluation") {
    auto F = silver();
    NfElem z = F->theta() * F->theta() - F->one();  // 2 theta
    const RootSet& rs = F->root_set(128);
    for (const auto& b : rs.roots) {
        CF v = z.embed_arch(b, 160);
        Real expect_re = Real(b.re, 160) * 2;
        CHECK(abs(v.re - expect_re) < 1e-30);
    }
    // p-adic embedding: for G = Q[x]/(x^2-3x-2), theta has a 2-adic image
    // gamma with v_2(gamma) = 1; theta - 3 = 2/theta must embed integrally
    auto G = NumberField::create(parse_associated("x^2-3x-2"));
    auto pc_sides = newton_polygon(G->poly(), 2);
    REQUIRE(pc_sides.size() == 2);
    PadicSide side;
    side.p = 2;
    side.slope = Rat(-1);
    side.length = 1;
    side.stable = true;
    detail::lift_side(G->poly(), 2, NewtonSide{Rat(-1), 1}, 64, side);
    REQUIRE(side.evaluatable);
    PadicNumber th2 = PadicNumber::from_int(2, 64, side.lifted_units[0]) *
                      PadicNumber::from_rat(2, 64, Rat(2));
    NfElem z2 = G->theta() - G->from_rat(3);
    PadicNumber img = z2.embed_padic(th2, 2, 64);
    CHECK(img.valuation() >= 0);
    // and it equals 2/theta: img * theta = 2
    PadicNumber prod = img * th2;
    CHECK((prod - PadicNumber::from_int(2, 64, 2)).vanishes_mod(50));
}
