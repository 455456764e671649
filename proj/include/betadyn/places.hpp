/*
   Copyright 2026 The betadyn authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef BETADYN_PLACES_HPP
#define BETADYN_PLACES_HPP

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "laurent.hpp"
#include "padic.hpp"
#include "qpoly.hpp"
#include "roots.hpp"

namespace betadyn {

// ---------------------------------------------------------------------------
// hyperbolicity, decided exactly on the boundary

struct HyperbolicResult {
    bool value = false;
    int circle_root_count = 0;   // distinct roots on |z| = 1 (exact)
    Rat min_gap_lower = 0;       // rigorous lower bound on min | |root| - 1 |
    operator bool() const { return value; }
};

namespace detail {

/// For palindromic h of even degree 2k with h(+-1) != 0, the polynomial q
/// with h(x)/x^k = q(x + 1/x). Circle roots of h <-> real roots of q in (-2,2).
inline QPoly chebyshev_fold(const QPoly& h) {
    int deg = h.degree();
    if (deg % 2 != 0) fail(Errc::internal, "chebyshev_fold: odd degree");
    int k = deg / 2;
    // P_0 = 2, P_1 = w, P_j = w P_{j-1} - P_{j-2} give x^j + x^-j = P_j(x + 1/x)
    std::vector<QPoly> P((size_t)k + 1);
    P[0] = QPoly::constant(Rat(2));
    if (k >= 1) P[1] = QPoly(std::vector<Rat>{Rat(0), Rat(1)});
    for (int j = 2; j <= k; ++j) P[(size_t)j] = QPoly(std::vector<Rat>{Rat(0), Rat(1)}) * P[(size_t)j - 1] - P[(size_t)j - 2];
    QPoly q = QPoly::constant(h.c[(size_t)k]);
    for (int j = 1; j <= k; ++j) q = q + QPoly::constant(h.c[(size_t)(k + j)]) * P[(size_t)j];
    return q;
}

}  // namespace detail

/// True iff no complex root of f lies on the unit circle. The boundary is
/// decided exactly: roots on |z| = 1 are common roots of f and its reverse,
/// and within that gcd they are located by folding x + 1/x and counting real
/// roots in (-2, 2) with a Sturm chain. No numeric proximity involved.
inline HyperbolicResult is_hyperbolic(const AssociatedPoly& f) {
    HyperbolicResult res;
    QPoly fq = QPoly::from_assoc(f);

    int circle = 0;
    if (fq.eval(Rat(1)) == 0) ++circle;
    if (fq.eval(Rat(-1)) == 0) ++circle;

    QPoly g = qpoly_gcd(fq, fq.reversed());
    // remove the +-1 roots from g; what is left is palindromic of even degree
    for (Rat r : {Rat(1), Rat(-1)}) {
        QPoly lin(std::vector<Rat>{-r, Rat(1)});
        while (!g.is_zero() && g.degree() > 0 && g.eval(r) == 0) g = qpoly_divmod(g, lin).first;
    }
    if (g.degree() > 0) {
        QPoly q = detail::chebyshev_fold(g.monic());
        if (q.eval(Rat(2)) == 0 || q.eval(Rat(-2)) == 0)
            fail(Errc::internal, "unexpected root at w = +-2");
        circle += sturm_count_open(q, Rat(-2), Rat(2)) * 2;  // conjugate pairs
    }
    res.circle_root_count = circle;
    res.value = (circle == 0);

    if (res.value) {
        // certificate: rigorous lower bound on distance of moduli to 1
        long bits = 96;
        for (int attempt = 0; attempt < 8; ++attempt, bits *= 2) {
            RootSet rs = isolate_roots(f, bits);
            Rat best = -1;
            bool decided = true;
            for (const auto& b : rs.roots) {
                auto [lo, hi] = b.modulus_sq_bounds();
                Rat gap;
                if (hi < 1) gap = (1 - hi) / 2;
                else if (lo > 1) gap = (lo - 1) / (2 * (lo > 1 ? lo : Rat(1)));
                else { decided = false; break; }
                if (best < 0 || gap < best) best = gap;
            }
            if (decided) { res.min_gap_lower = best; return res; }
        }
        fail(Errc::precision_exhausted, "hyperbolic but could not certify modulus gap");
    }
    return res;
}

// ---------------------------------------------------------------------------
// irreducibility over Q, exhaustive at desk scale

/// Rational-root test plus bounded search over integer factor candidates of
/// degree <= deg/2. Exact; degree capped at 6.
inline bool is_irreducible(const AssociatedPoly& f) {
    int d = f.degree();
    if (d > 6) fail(Errc::degree_too_large, "is_irreducible: degree > 6");
    if (d <= 0) return false;
    if (d == 1) return true;

    QPoly fq = QPoly::from_assoc(f);
    if (qpoly_gcd(fq, fq.derivative()).degree() > 0) return false;  // repeated factor

    auto divisors_of = [](const Int& n) {
        std::vector<Int> out;
        Int a = abs(n);
        for (Int t = 1; t * t <= a; ++t)
            if (a % t == 0) {
                out.push_back(t);
                if (t * t != a) out.push_back(a / t);
            }
        return out;
    };

    // rational roots p/q with p | a_0, q | a_d
    for (const Int& p : divisors_of(f.constant()))
        for (const Int& q : divisors_of(f.leading()))
            for (int s = -1; s <= 1; s += 2) {
                Rat r(s * p, q);
                r.canonicalize();
                if (fq.eval(r) == 0) return false;
            }
    if (d <= 3) return true;  // no rational root, degree <= 3

    // Cauchy bound on root moduli, as an integer
    Rat rho = 0;
    for (int i = 0; i < d; ++i) {
        Rat t = rat_abs(Rat(f[i], f[d]));
        if (t > rho) rho = t;
    }
    Int rho_i = rat_floor(rho) + 2;  // > 1 + max |a_i/a_d|

    auto binom = [](int n, int k) {
        long r = 1;
        for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
        return Int(r);
    };

    // values f(t) for the cheap divisibility filter g(t) | f(t)
    const std::vector<Int> sample_ts{Int(1), Int(-1), Int(2), Int(-2)};
    std::vector<Int> fvals;
    for (const auto& t : sample_ts) {
        Rat v = fq.eval(Rat(t));
        fvals.push_back(v.get_num());
    }

    for (int k = 2; k <= d / 2; ++k) {
        std::vector<Int> lead_divs = divisors_of(f.leading());
        std::vector<Int> const_divs = divisors_of(f.constant());
        for (const Int& bk : lead_divs) {
            // bounds |b_j| <= b_k * C(k, k-j) * rho^(k-j)
            std::vector<Int> bound((size_t)k);
            for (int j = 0; j < k; ++j) bound[(size_t)j] = bk * binom(k, k - j) * int_pow(rho_i, (unsigned long)(k - j));
            for (const Int& b0a : const_divs) {
                if (abs(b0a) > bound[0]) continue;
                for (int s0 = -1; s0 <= 1; s0 += 2) {
                    Int b0 = s0 * b0a;
                    // enumerate the k-1 middle coefficients
                    std::vector<Int> mid((size_t)k - 1, Int(0));
                    for (size_t i = 0; i < mid.size(); ++i) mid[i] = -bound[i + 1];
                    for (;;) {
                        // candidate g = b0 + mid... + bk x^k
                        bool plausible = true;
                        for (size_t ti = 0; ti < sample_ts.size() && plausible; ++ti) {
                            Int gv = bk, t = sample_ts[ti];
                            for (size_t i = mid.size(); i-- > 0;) gv = gv * t + mid[i];
                            gv = gv * t + b0;
                            if (gv == 0) continue;  // t is a root of g; filter silent
                            if (fvals[ti] % gv != 0) plausible = false;
                        }
                        if (plausible) {
                            std::vector<Rat> gc;
                            gc.emplace_back(b0);
                            for (const auto& m : mid) gc.emplace_back(m);
                            gc.emplace_back(bk);
                            QPoly g(std::move(gc));
                            if (g.degree() == k && qpoly_divides(g, fq)) return false;
                        }
                        // increment odometer
                        size_t pos = 0;
                        while (pos < mid.size()) {
                            if (mid[pos] < bound[pos + 1]) { ++mid[pos]; break; }
                            mid[pos] = -bound[pos + 1];
                            ++pos;
                        }
                        if (pos == mid.size()) break;
                    }
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Newton polygons

struct NewtonSide {
    Rat slope;   // side slope m: contributes `length` roots of valuation -m
    int length;  // horizontal extent
};

/// Lower convex hull of {(i, v_p(a_i)) : a_i != 0}.
inline std::vector<NewtonSide> newton_polygon(const AssociatedPoly& f, long p) {
    if (p < 2) fail(Errc::internal, "newton_polygon: p must be prime");
    std::vector<std::pair<long, long>> pts;  // (i, v_p(a_i))
    for (int i = 0; i <= f.degree(); ++i) {
        if (f[i] == 0) continue;
        Int a = abs(f[i]);
        long v = 0;
        while (mpz_divisible_ui_p(a.get_mpz_t(), (unsigned long)p)) { a /= p; ++v; }
        pts.emplace_back(i, v);
    }
    // Andrew-style lower hull over increasing i
    std::vector<std::pair<long, long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            // drop b if it lies on or above segment a-pt
            if ((Rat(b.second - a.second) * Rat(pt.first - a.first)) >=
                (Rat(pt.second - a.second) * Rat(b.first - a.first)))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<NewtonSide> sides;
    for (size_t i = 1; i < hull.size(); ++i) {
        Rat slope(hull[i].second - hull[i - 1].second, hull[i].first - hull[i - 1].first);
        slope.canonicalize();
        sides.push_back({slope, (int)(hull[i].first - hull[i - 1].first)});
    }
    return sides;
}

// ---------------------------------------------------------------------------
// Pisot classification

enum class PisotSide { none, direct, reciprocal };

struct PisotReport {
    PisotSide side = PisotSide::none;
    bool is_unit = false;
    RootBox beta;                 // the Pisot root, certified
    AssociatedPoly monic_side;    // defined when side != none
    bool found() const { return side != PisotSide::none; }
};

namespace detail {

inline bool side_is_pisot(const AssociatedPoly& g, long bits, RootBox& beta_out) {
    if (!g.monic()) return false;
    if (!is_hyperbolic(g).value) return false;  // Pisot polynomials are hyperbolic
    if (!is_irreducible(g)) return false;
    for (int attempt = 0; attempt < 6; ++attempt, bits *= 2) {
        RootSet rs = isolate_roots(g, bits);
        int big = 0;
        bool decided = true;
        RootBox beta;
        for (const auto& b : rs.roots) {
            auto [lo, hi] = b.modulus_sq_bounds();
            if (hi < 1) continue;
            if (lo > 1) {
                ++big;
                // the expanding root must be real and > 1
                if (!b.is_real() || !(b.re - b.rad > 1)) return false;
                beta = b;
                continue;
            }
            decided = false;
            break;
        }
        if (!decided) continue;  // refine
        if (big != 1) return false;
        beta_out = beta;
        return true;
    }
    fail(Errc::precision_exhausted, "pisot test: undecidable moduli");
}

}  // namespace detail

/// Which of f, reciprocal(f) is monic and irreducible with a Pisot root.
inline PisotReport pisot_classify(const AssociatedPoly& f, long precision_bits = 128) {
    PisotReport rep;
    RootBox beta;
    if (detail::side_is_pisot(f, precision_bits, beta)) {
        rep.side = PisotSide::direct;
        rep.monic_side = f;
        rep.beta = beta;
        rep.is_unit = abs(f.constant()) == 1;
        return rep;
    }
    AssociatedPoly r = reciprocal_poly(f);
    if (detail::side_is_pisot(r, precision_bits, beta)) {
        rep.side = PisotSide::reciprocal;
        rep.monic_side = r;
        rep.beta = beta;
        rep.is_unit = abs(r.constant()) == 1;
        return rep;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// place classification

struct ArchPlace {
    RootBox root;  // root of f; conjugate pairs carry the im > 0 representative
    bool stable;   // |root| < 1
    bool complex_pair;
};

struct PadicSide {
    long p;
    Rat slope;        // Newton polygon side slope; root valuation is -slope
    int length;       // root count of the side
    bool stable;      // slope < 0 <=> valuation > 0 <=> stable
    bool evaluatable; // all `length` roots lifted into Q_p
    std::string note; // reason when not evaluatable
    long root_valuation;            // -slope when integral
    std::vector<Int> lifted_units;  // unit parts mod p^digits, one per root
    int digits;
};

struct PlaceClassification {
    AssociatedPoly f;
    RootSet roots;
    std::vector<ArchPlace> archimedean;
    std::vector<PadicSide> nonarchimedean;
    PisotReport pisot;
    long precision_bits;
    int padic_digits;

    int arch_coord_dim() const {  // real dimension of the archimedean block
        int n = 0;
        for (const auto& a : archimedean) n += a.complex_pair ? 2 : 1;
        return n;
    }
    bool has_unstable_nonarch() const {
        for (const auto& s : nonarchimedean)
            if (!s.stable) return true;
        return false;
    }
    bool has_stable_nonarch() const {
        for (const auto& s : nonarchimedean)
            if (s.stable) return true;
        return false;
    }
};

namespace detail {

inline std::vector<long> prime_factors(Int n) {
    std::vector<long> out;
    n = abs(n);
    for (Int p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p.get_si());
            while (n % p == 0) n /= p;
        }
    if (n > 1) {
        if (!n.fits_slong_p()) fail(Errc::internal, "prime factor out of range");
        out.push_back(n.get_si());
    }
    return out;
}

/// Hensel data for one Newton polygon side of f at p.
inline void lift_side(const AssociatedPoly& f, long p, const NewtonSide& side, int digits,
                      PadicSide& out) {
    out.evaluatable = false;
    out.digits = digits;
    if (side.slope.get_den() != 1) {
        out.note = "ramified side (non-integral slope)";
        return;
    }
    long m = side.slope.get_num().get_si();  // root valuation is -m
    out.root_valuation = -m;
    // g(y) = p^-c * f(p^-m y): roots of valuation 0 of g <-> roots of f of
    // valuation -m
    int d = f.degree();
    std::vector<long> shift((size_t)d + 1, 0);
    long cmin = 0;
    bool first = true;
    for (int i = 0; i <= d; ++i) {
        if (f[i] == 0) continue;
        Int a = abs(f[i]);
        long v = 0;
        while (mpz_divisible_ui_p(a.get_mpz_t(), (unsigned long)p)) { a /= p; ++v; }
        long tot = v - m * i;
        shift[(size_t)i] = tot;
        if (first || tot < cmin) { cmin = tot; first = false; }
    }
    std::vector<Int> g((size_t)d + 1, Int(0));
    for (int i = 0; i <= d; ++i) {
        if (f[i] == 0) continue;
        Int t = f[i];
        long e = shift[(size_t)i] - cmin;
        // t * p^(e - v_p(t)) keeping integrality: recompute directly
        // g_i = f_i * p^(-m i - cmin); valuations guarantee integrality
        long need = -m * i - cmin;
        if (need >= 0) t *= int_pow(Int(p), (unsigned long)need);
        else {
            Int q = int_pow(Int(p), (unsigned long)(-need));
            if (t % q != 0) fail(Errc::internal, "newton side scaling not integral");
            t /= q;
        }
        (void)e;
        g[(size_t)i] = t;
    }
    // roots of g mod p in F_p^* (nonzero), must be simple; expect side.length
    if (p > 2000000L) {
        out.note = "prime too large for residue search";
        return;
    }
    std::vector<Int> units;
    Int pi(p);
    auto evalmod = [&](const std::vector<Int>& c, const Int& x) {
        Int r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = (r * x + *it) % pi;
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pi.get_mpz_t());
        return r;
    };
    std::vector<Int> dg;
    for (size_t i = 1; i < g.size(); ++i) dg.push_back(Int((long)i) * g[i]);
    int simple = 0;
    for (long r = 1; r < p; ++r) {
        if (evalmod(g, Int(r)) != 0) continue;
        if (evalmod(dg, Int(r)) == 0) {
            out.note = "repeated local factor modulo p";
            return;
        }
        units.push_back(hensel_lift_root(g, p, Int(r), digits));
        ++simple;
    }
    if (simple != side.length) {
        out.note = "local factor of degree > 1 (root outside Q_p)";
        return;
    }
    out.evaluatable = true;
    out.lifted_units = std::move(units);
}

}  // namespace detail

/// Full stable/unstable place table of an expansive irreducible system:
/// archimedean tags from certified root moduli, non-archimedean places from
/// Newton polygons over primes dividing a_0 (stable side) and a_d (unstable).
inline PlaceClassification classify_places(const AssociatedPoly& f, long precision_bits = 128,
                                           int padic_digits = 64) {
    if (!is_hyperbolic(f).value) fail(Errc::not_hyperbolic, "classify_places: f not hyperbolic");
    if (!is_irreducible(f)) fail(Errc::not_irreducible, "classify_places: f reducible");

    PlaceClassification pc;
    pc.f = f;
    pc.precision_bits = precision_bits;
    pc.padic_digits = padic_digits;

    long bits = precision_bits;
    for (int attempt = 0;; ++attempt, bits *= 2) {
        if (attempt > 6) fail(Errc::precision_exhausted, "classify_places: undecidable modulus");
        RootSet rs = isolate_roots(f, bits);
        bool decided = true;
        std::vector<ArchPlace> arch;
        for (const auto& b : rs.roots) {
            if (b.im < 0) continue;  // conjugate of the im > 0 place
            auto [lo, hi] = b.modulus_sq_bounds();
            if (hi < 1) arch.push_back({b, true, b.im > 0});
            else if (lo > 1) arch.push_back({b, false, b.im > 0});
            else { decided = false; break; }
        }
        if (decided) {
            pc.roots = std::move(rs);
            pc.archimedean = std::move(arch);
            break;
        }
    }

    std::vector<long> ps = detail::prime_factors(f.constant() * f.leading());
    for (long p : ps) {
        for (const auto& side : newton_polygon(f, p)) {
            if (side.slope == 0) continue;  // neither stable nor unstable
            PadicSide s;
            s.p = p;
            s.slope = side.slope;
            s.length = side.length;
            s.stable = side.slope < 0;
            detail::lift_side(f, p, side, padic_digits, s);
            pc.nonarchimedean.push_back(std::move(s));
        }
    }

    // Corollary cross-check (both mirrors); structural, so enforced
    bool monic = f.leading() == 1;
    bool const_unit = abs(f.constant()) == 1;
    if (monic == pc.has_unstable_nonarch())
        fail(Errc::internal, "corollary violated: monic vs unstable non-archimedean");
    if (const_unit == pc.has_stable_nonarch())
        fail(Errc::internal, "corollary violated: unit constant vs stable non-archimedean");

    pc.pisot = pisot_classify(f, precision_bits);
    return pc;
}

// ---------------------------------------------------------------------------
// evaluation of digit series at a place

/// Sparse digit data with optional periodic tails: window digits plus a
/// right tail repeating from right_start upward and a left tail repeating
/// from left_start downward. Tails make the expansion-of-1 witnesses exact.
struct TailedDigits {
    IntLaurentPoly window;
    std::vector<long> right_tail;  // digits at right_start, right_start+1, ...
    long right_start = 0;
    std::vector<long> left_tail;   // digits at left_start, left_start-1, ...
    long left_start = 0;

    static TailedDigits from_window(const IntLaurentPoly& w) {
        TailedDigits t;
        t.window = w;
        return t;
    }
    bool has_right_tail() const { return !right_tail.empty(); }
    bool has_left_tail() const { return !left_tail.empty(); }
};

/// Archimedean evaluation: sum s_n root^n over the window plus geometric
/// closed forms for the tails. Tails on the divergent side raise
/// DivergentDirection.
inline CF eval_series_arch(const TailedDigits& s, const RootBox& root, long bits) {
    CF r = CF::with_prec(bits);
    r.re = Real(root.re, (mp_bitcnt_t)bits);
    r.im = Real(root.im, (mp_bitcnt_t)bits);
    CF one = CF::with_prec(bits);
    one.re = 1;

    auto cpow = [&](const CF& b, long e) {
        CF acc = one, base = b;
        bool inv = e < 0;
        unsigned long n = (unsigned long)(inv ? -e : e);
        while (n) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return inv ? one / acc : acc;
    };

    CF total = CF::with_prec(bits);
    for (const auto& [e, c] : s.window.terms()) {
        CF t = cpow(r, e);
        Real cc(c, (mp_bitcnt_t)bits);
        total.re += t.re * cc;
        total.im += t.im * cc;
    }
    auto mod_sq = root.modulus_sq_bounds();
    if (s.has_right_tail()) {
        if (!(mod_sq.second < 1))
            fail(Errc::divergent_direction, "right tail at a place with |root| >= 1");
        long L = (long)s.right_tail.size();
        CF rl = cpow(r, L);
        CF denom = one - rl;
        CF acc = CF::with_prec(bits);
        for (long j = 0; j < L; ++j) {
            CF t = cpow(r, s.right_start + j);
            Real cc((long)s.right_tail[(size_t)j], (mp_bitcnt_t)bits);
            acc.re += t.re * cc;
            acc.im += t.im * cc;
        }
        total = total + acc / denom;
    }
    if (s.has_left_tail()) {
        if (!(mod_sq.first > 1))
            fail(Errc::divergent_direction, "left tail at a place with |root| <= 1");
        long L = (long)s.left_tail.size();
        CF rl = cpow(r, -L);
        CF denom = one - rl;
        CF acc = CF::with_prec(bits);
        for (long j = 0; j < L; ++j) {
            CF t = cpow(r, s.left_start - j);
            Real cc((long)s.left_tail[(size_t)j], (mp_bitcnt_t)bits);
            acc.re += t.re * cc;
            acc.im += t.im * cc;
        }
        total = total + acc / denom;
    }
    return total;
}

/// spec-named dispatchers for the two place kinds
inline CF evaluate_series_at_place(const TailedDigits& s, const ArchPlace& place, long bits) {
    return eval_series_arch(s, place.root, bits);
}
inline PadicNumber eval_series_padic(const TailedDigits& s, const PadicSide& side,
                                     size_t subplace);
inline PadicNumber evaluate_series_at_place(const TailedDigits& s, const PadicSide& side,
                                            size_t subplace = 0) {
    return eval_series_padic(s, side, subplace);
}

/// p-adic evaluation at one lifted sub-place of a PadicSide.
inline PadicNumber eval_series_padic(const TailedDigits& s, const PadicSide& side,
                                     size_t subplace = 0) {
    if (!side.evaluatable)
        fail(Errc::hensel_failure, "place not evaluatable: " + side.note);
    if (subplace >= side.lifted_units.size()) fail(Errc::internal, "bad subplace index");
    PadicNumber gamma(side.p, side.digits);
    {
        // gamma = p^root_valuation * unit
        PadicNumber unit = PadicNumber::from_int(side.p, side.digits, side.lifted_units[subplace]);
        PadicNumber scale = PadicNumber::from_rat(side.p, side.digits,
                                                  rat_pow(Rat(side.p), side.root_valuation));
        gamma = unit * scale;
    }
    PadicNumber total(side.p, side.digits);
    for (const auto& [e, c] : s.window.terms())
        total = total + gamma.pow(e) * PadicNumber::from_int(side.p, side.digits, c);

    auto tail_sum = [&](const std::vector<long>& tail, long start, long dir) {
        long L = (long)tail.size();
        PadicNumber one = PadicNumber::from_int(side.p, side.digits, 1);
        PadicNumber ratio = gamma.pow(dir * L);
        if (ratio.valuation_lower_bound() < 1)
            fail(Errc::divergent_direction, "tail ratio is not p-adically small");
        PadicNumber denom = one - ratio;
        PadicNumber acc(side.p, side.digits);
        for (long j = 0; j < L; ++j)
            acc = acc + gamma.pow(start + dir * j) *
                            PadicNumber::from_int(side.p, side.digits, Int(tail[(size_t)j]));
        return acc * denom.inverse();
    };
    if (s.has_right_tail()) total = total + tail_sum(s.right_tail, s.right_start, +1);
    if (s.has_left_tail()) total = total + tail_sum(s.left_tail, s.left_start, -1);
    return total;
}

}  // namespace betadyn

#endif  // BETADYN_PLACES_HPP
