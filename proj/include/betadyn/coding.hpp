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

#ifndef BETADYN_CODING_HPP
#define BETADYN_CODING_HPP

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "beta.hpp"
#include "common.hpp"
#include "numberfield.hpp"
#include "places.hpp"
#include "polyring.hpp"
#include "shift.hpp"

namespace betadyn {

// ---------------------------------------------------------------------------
// homoclinic data

struct HomoclinicSeq {
    RealLaurentWindow window;  // coefficients of 1/f on the annulus
    Real decay_rate;           // max of the two geometric tail ratios
};

/// The fundamental homoclinic point's coordinate sequence: 1/f on the unit
/// annulus. Convolution with f is the delta at 0 within the tail bound.
inline HomoclinicSeq homoclinic_fundamental(const AssociatedPoly& f, long n_min, long n_max,
                                            long precision_bits = 128) {
    if (!is_irreducible(f)) fail(Errc::not_irreducible, "homoclinic_fundamental: f reducible");
    HomoclinicSeq h;
    h.window = inverse_laurent_coeffs(f, n_min, n_max, precision_bits);
    h.decay_rate = std::max(mpf_class(h.window.tail_rho_pos), mpf_class(h.window.tail_rho_neg));
    return h;
}

// ---------------------------------------------------------------------------
// coding context: the unfolding of a Pisot automorphism, concretely

struct CodingContext {
    AssociatedPoly f;
    PlaceClassification places;
    std::shared_ptr<const NumberField> F;  // field of the monic side; theta integral
    bool direct;                            // xi == theta (else xi == 1/theta)
    NfElem xi;                              // image of f's variable x in F
    BetaContext beta_ctx;
    ParryData pd;
    ParryAutomaton automaton;

    std::vector<RootBox> theta_arch;  // theta's image at each archimedean place of f

    struct PadicCoord {
        size_t side;      // index into places.nonarchimedean
        size_t sub;       // lifted root index within the side
        long p;
        int digits;
        bool stable;
        PadicNumber xi_img;
        PadicNumber theta_img;
    };
    std::vector<PadicCoord> padic_coords;

    long precision_bits;
    int arch_dim;  // real dimension of the archimedean block
};

namespace detail {

inline RootBox invert_box(const RootBox& b) {
    Rat n2 = b.re * b.re + b.im * b.im;
    if (n2 == 0) fail(Errc::internal, "invert_box: box at 0");
    RootBox out;
    out.re = b.re / n2;
    out.im = -b.im / n2;
    out.mult = b.mult;
    if (b.exact) {
        out.rad = 0;
        out.exact = true;
        return out;
    }
    // |1/z - 1/w| <= rad / (|z| (|z| - rad)); |z| >= n2 / upper_abs
    Rat s = n2 / b.upper_abs();
    if (s <= b.rad) fail(Errc::precision_exhausted, "invert_box: enclosure touches 0");
    out.rad = b.rad / (s * (s - b.rad));
    out.exact = false;
    return out;
}

}  // namespace detail

/// Builds the full coding context for a Pisot automorphism polynomial:
/// places, the monic-side number field, Parry data and automaton, and the
/// theta-images at every stable/unstable place.
inline CodingContext make_coding_context(const AssociatedPoly& f, long precision_bits = 128,
                                         int padic_digits = 64) {
    CodingContext ctx;
    ctx.f = f;
    ctx.precision_bits = precision_bits;
    ctx.places = classify_places(f, precision_bits, padic_digits);
    if (!ctx.places.pisot.found())
        fail(Errc::not_pisot, "coding requires a Pisot automorphism polynomial");
    ctx.beta_ctx = make_beta_context(f, precision_bits);
    ctx.F = ctx.beta_ctx.F;
    ctx.direct = (ctx.places.pisot.side == PisotSide::direct);
    ctx.xi = ctx.direct ? ctx.F->theta() : ctx.F->theta_inv();
    ctx.pd = parry_data(ctx.beta_ctx);
    ctx.automaton = build_automaton(ctx.pd);

    for (const auto& ap : ctx.places.archimedean)
        ctx.theta_arch.push_back(ctx.direct ? ap.root : detail::invert_box(ap.root));

    for (size_t si = 0; si < ctx.places.nonarchimedean.size(); ++si) {
        const auto& side = ctx.places.nonarchimedean[si];
        if (!side.evaluatable)
            fail(Errc::hensel_failure,
                 "place over p=" + std::to_string(side.p) + " not evaluatable: " + side.note);
        for (size_t k = 0; k < side.lifted_units.size(); ++k) {
            CodingContext::PadicCoord pc;
            pc.side = si;
            pc.sub = k;
            pc.p = side.p;
            pc.digits = side.digits;
            pc.stable = side.stable;
            PadicNumber unit = PadicNumber::from_int(side.p, side.digits, side.lifted_units[k]);
            PadicNumber scale =
                PadicNumber::from_rat(side.p, side.digits, rat_pow(Rat(side.p), side.root_valuation));
            pc.xi_img = unit * scale;
            pc.theta_img = ctx.direct ? pc.xi_img : pc.xi_img.inverse();
            ctx.padic_coords.push_back(std::move(pc));
        }
    }
    ctx.arch_dim = ctx.places.arch_coord_dim();
    return ctx;
}

// ---------------------------------------------------------------------------
// sequences with optional periodic tails (exact coding inputs)

/// A windowed sequence with optional periodic tails: right_tail repeats from
/// n_max+1 upward, left_tail from n_min-1 downward. Tails make the
/// expansion-of-1 rewrites exact instead of truncated.
struct SeqInput {
    BiSequence window;
    std::vector<long> right_tail;
    std::vector<long> left_tail;

    static SeqInput from_window(const BiSequence& w) {
        SeqInput s;
        s.window = w;
        return s;
    }
    bool tailed() const { return !right_tail.empty() || !left_tail.empty(); }

    /// materialize a few tail periods for admissibility checking; the left
    /// tail lists digits at n_min-1, n_min-2, ... so it reverses in reading
    /// order
    std::vector<long> admissibility_word(int repeats = 3) const {
        std::vector<long> w;
        if (!left_tail.empty()) {
            long L = (long)left_tail.size();
            for (long n = window.n_min - repeats * L; n <= window.n_min - 1; ++n)
                w.push_back(left_tail[(size_t)((window.n_min - 1 - n) % L)]);
        }
        for (long n = window.n_min; n <= window.n_max; ++n) w.push_back(window.at(n));
        if (!right_tail.empty()) {
            long R = (long)right_tail.size();
            for (long j = 0; j < repeats * R; ++j) w.push_back(right_tail[(size_t)(j % R)]);
        }
        return w;
    }
};

/// Exact value of the n >= 1 part as an element of Q(beta) (series in xi,
/// geometric tails summed in closed form).
inline NfElem exact_plus(const SeqInput& s, const CodingContext& ctx) {
    NfElem acc = ctx.F->zero();
    for (long n = std::max(1L, s.window.n_min); n <= s.window.n_max; ++n)
        if (s.window.at(n) != 0) acc = acc + Rat(s.window.at(n)) * ctx.xi.pow(n);
    if (!s.right_tail.empty()) {
        if (s.window.n_max < 0) fail(Errc::internal, "right tail must start at n >= 1");
        long L = (long)s.right_tail.size();
        NfElem per = ctx.F->zero();
        for (long j = 0; j < L; ++j)
            per = per + Rat(s.right_tail[(size_t)j]) * ctx.xi.pow(s.window.n_max + 1 + j);
        acc = acc + per / (ctx.F->one() - ctx.xi.pow(L));
    }
    return acc;
}

/// Exact value of the n <= 0 part.
inline NfElem exact_minus(const SeqInput& s, const CodingContext& ctx) {
    NfElem acc = ctx.F->zero();
    for (long n = s.window.n_min; n <= std::min(0L, s.window.n_max); ++n)
        if (s.window.at(n) != 0) acc = acc + Rat(s.window.at(n)) * ctx.xi.pow(n);
    if (!s.left_tail.empty()) {
        if (s.window.n_min > 0) fail(Errc::internal, "left tail must start at n <= 0");
        long L = (long)s.left_tail.size();
        NfElem per = ctx.F->zero();
        for (long j = 0; j < L; ++j)
            per = per + Rat(s.left_tail[(size_t)j]) * ctx.xi.pow(s.window.n_min - 1 - j);
        acc = acc + per / (ctx.F->one() - ctx.xi.pow(-L));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// phase points

struct PhasePoint {
    std::vector<CF> arch;             // aligned with places.archimedean
    std::vector<PadicNumber> padic;   // aligned with ctx.padic_coords
    bool reduced = false;
};

namespace detail {

inline TailedDigits plus_part(const SeqInput& s) {
    TailedDigits t;
    std::map<long, Int> m;
    for (long n = std::max(1L, s.window.n_min); n <= s.window.n_max; ++n)
        if (s.window.at(n) != 0) m[n] = s.window.at(n);
    t.window = IntLaurentPoly::from_map(m);
    if (!s.right_tail.empty()) {
        t.right_tail = s.right_tail;
        t.right_start = s.window.n_max + 1;
    }
    return t;
}

inline TailedDigits minus_part(const SeqInput& s) {
    TailedDigits t;
    std::map<long, Int> m;
    for (long n = s.window.n_min; n <= std::min(0L, s.window.n_max); ++n)
        if (s.window.at(n) != 0) m[n] = s.window.at(n);
    t.window = IntLaurentPoly::from_map(m);
    if (!s.left_tail.empty()) {
        t.left_tail = s.left_tail;
        t.left_start = s.window.n_min - 1;
    }
    return t;
}

}  // namespace detail

/// The natural coding: c+ (digits at n >= 1) evaluated at every stable place,
/// c- (digits at n <= 0) at every unstable place. Admissibility of the input
/// is checked; the result is not yet reduced.
inline PhasePoint code_sequence(const SeqInput& s, const CodingContext& ctx, long bits = 0) {
    if (bits == 0) bits = ctx.precision_bits;
    {
        auto w = s.admissibility_word();
        if (!is_admissible(w, ctx.pd))
            fail(Errc::alphabet_violation, "code_sequence: input sequence not admissible");
    }
    TailedDigits plus = detail::plus_part(s), minus = detail::minus_part(s);
    PhasePoint out;
    for (size_t i = 0; i < ctx.places.archimedean.size(); ++i) {
        const auto& ap = ctx.places.archimedean[i];
        out.arch.push_back(eval_series_arch(ap.stable ? plus : minus, ap.root, bits));
    }
    for (const auto& pc : ctx.padic_coords) {
        const auto& side = ctx.places.nonarchimedean[pc.side];
        out.padic.push_back(eval_series_padic(pc.stable ? plus : minus, side, pc.sub));
    }
    return out;
}

/// coordinate-wise action of subtracting the diagonal element q:
/// unstable coordinates gain q, stable coordinates lose q. Working precision
/// grows with the height of q so large clearing elements cancel losslessly.
inline void apply_diagonal(PhasePoint& p, const NfElem& q, const CodingContext& ctx, long bits) {
    long hbits = 0;
    for (const auto& c : q.coords()) {
        hbits = std::max(hbits, (long)mpz_sizeinbase(c.get_num().get_mpz_t(), 2));
        hbits = std::max(hbits, (long)mpz_sizeinbase(c.get_den().get_mpz_t(), 2));
    }
    long work = bits + hbits + 64;
    for (size_t i = 0; i < p.arch.size(); ++i) {
        CF img = q.embed_arch(ctx.theta_arch[i], work);
        CF updated = CF::with_prec(work);
        if (ctx.places.archimedean[i].stable) {
            updated.re = p.arch[i].re - img.re;
            updated.im = p.arch[i].im - img.im;
        } else {
            updated.re = p.arch[i].re + img.re;
            updated.im = p.arch[i].im + img.im;
        }
        p.arch[i] = updated;
    }
    for (size_t i = 0; i < p.padic.size(); ++i) {
        const auto& pc = ctx.padic_coords[i];
        PadicNumber img = q.embed_padic(pc.theta_img, pc.p, pc.digits);
        p.padic[i] = pc.stable ? (p.padic[i] - img) : (p.padic[i] + img);
    }
}

namespace detail {

/// flatten the archimedean block to a real vector (complex places: re, im)
inline std::vector<Real> arch_vector(const PhasePoint& p, const CodingContext& ctx, long bits) {
    std::vector<Real> v;
    for (size_t i = 0; i < p.arch.size(); ++i) {
        v.push_back(p.arch[i].re);
        if (ctx.places.archimedean[i].complex_pair) v.push_back(p.arch[i].im);
    }
    (void)bits;
    return v;
}

/// columns: delta(theta^j) in the flattened archimedean coordinates, with the
/// diagonal signs (-1 at unstable places, +1 at stable)
inline std::vector<std::vector<Real>> lattice_basis(const CodingContext& ctx, long bits) {
    int d = ctx.F->degree();
    std::vector<std::vector<Real>> cols;
    for (int j = 0; j < d; ++j) {
        NfElem tj = ctx.F->theta().pow(j);
        std::vector<Real> col;
        for (size_t i = 0; i < ctx.places.archimedean.size(); ++i) {
            CF img = tj.embed_arch(ctx.theta_arch[i], bits);
            Real sgnv(ctx.places.archimedean[i].stable ? 1 : -1, 64);
            col.push_back(img.re * sgnv);
            if (ctx.places.archimedean[i].complex_pair) col.push_back(img.im * sgnv);
        }
        cols.push_back(std::move(col));
    }
    return cols;
}

/// solve B t = v by Gaussian elimination (mpf, partial pivoting)
inline std::vector<Real> solve_lattice(const std::vector<std::vector<Real>>& cols,
                                       std::vector<Real> v, long bits) {
    size_t n = cols.size();
    std::vector<std::vector<Real>> m(n, std::vector<Real>(n + 1, Real(0, (mp_bitcnt_t)bits)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m[i][j] = cols[j][i];
        m[i][n] = v[i];
    }
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
        std::swap(m[c], m[piv]);
        if (m[c][c] == 0) fail(Errc::internal, "lattice basis singular");
        for (size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            Real factor = m[r][c] / m[c][c];
            for (size_t j = c; j <= n; ++j) m[r][j] -= factor * m[c][j];
        }
    }
    std::vector<Real> t;
    for (size_t i = 0; i < n; ++i) t.push_back(m[i][n] / m[i][i]);
    return t;
}

/// Principal-part clearing: a diagonal element w in Z[theta, 1/theta] such
/// that every p-adic coordinate of the translated point becomes integral.
/// Targets live at the places where theta has positive valuation (the only
/// non-archimedean places of a Pisot automorphism). Digits are cleared level
/// by level; when a prime carries several places the level system is a
/// Vandermonde in the distinct residues of theta and always solvable.
inline NfElem clearing_element(const PhasePoint& p, const CodingContext& ctx) {
    struct PrimeJob {
        long prime;
        std::vector<size_t> coords;  // indices into ctx.padic_coords
        long depth = 0;
        long e = 0;  // common valuation of theta at these places
    };
    std::map<long, PrimeJob> jobs;
    for (size_t i = 0; i < p.padic.size(); ++i) {
        long v = p.padic[i].is_zero() ? p.padic[i].valuation_lower_bound()
                                      : p.padic[i].valuation();
        if (v >= 0) continue;
        auto& job = jobs[ctx.padic_coords[i].p];
        job.prime = ctx.padic_coords[i].p;
        job.coords.push_back(i);
        job.depth = std::max(job.depth, -v);
    }
    if (jobs.empty()) return ctx.F->zero();

    NfElem w_total = ctx.F->zero();
    NfElem th_inv = ctx.F->theta_inv();

    // global data for cross-prime protection: candidates for one prime are
    // multiplied by a power of the other primes so they stay integral there
    long e_global = 1;
    std::set<long> all_primes;
    for (const auto& pc : ctx.padic_coords) {
        all_primes.insert(pc.p);
        e_global = std::max(e_global, pc.theta_img.valuation());
    }

    for (auto& [prime, job] : jobs) {
        // include every coordinate over this prime (clearing must not break
        // the already-integral ones; their residuals are tracked too)
        job.coords.clear();
        for (size_t i = 0; i < p.padic.size(); ++i)
            if (ctx.padic_coords[i].p == prime) job.coords.push_back(i);
        size_t b = job.coords.size();

        for (size_t ci : job.coords) {
            long tv = ctx.padic_coords[ci].theta_img.valuation();
            if (tv <= 0) fail(Errc::internal, "clearing: theta not positive at a bad place");
            if (job.e == 0) job.e = tv;
            else if (job.e != tv)
                fail(Errc::precision_exhausted,
                     "clearing with mixed theta valuations over one prime is unsupported");
        }
        long e = job.e;

        // protection factor against the other bad primes
        Int protect = 1;
        for (long q : all_primes)
            if (q != prime) protect *= q;
        long mmax = (job.depth + e - 1) / e + (long)b + 1;
        long J = protect == 1 ? 0 : mmax * e_global + 2;
        Int protJ = int_pow(protect, (unsigned long)J);
        Int prot_res = protJ % prime;  // unit residue of the protection factor

        // residual targets: R_P = +x_P (stable) or -x_P (unstable); we build
        // w with w == R_P mod O_P, then stable coords lose w, unstable gain it
        std::vector<PadicNumber> R;
        for (size_t ci : job.coords) {
            const auto& pc = ctx.padic_coords[ci];
            R.push_back(pc.stable ? p.padic[ci] : -p.padic[ci]);
        }
        // residues of theta^-1 mod p at each place: distinct nonzero units
        std::vector<Int> tinv_res;
        for (size_t ci : job.coords) {
            PadicNumber ti = ctx.padic_coords[ci].theta_img.inverse();
            // theta^-1 = p^-e * unit
            Int u0 = ti.mantissa() % prime;
            mpz_fdiv_r(u0.get_mpz_t(), u0.get_mpz_t(), Int(prime).get_mpz_t());
            tinv_res.push_back(u0);
        }
        for (size_t i = 0; i < b; ++i)
            for (size_t j = i + 1; j < b; ++j)
                if (tinv_res[i] == tinv_res[j])
                    fail(Errc::internal, "clearing: coincident theta residues");

        for (long v = -job.depth; v <= -1; ++v) {
            // digit of each residual at level v
            std::vector<Int> dig(b, Int(0));
            bool any = false;
            for (size_t i = 0; i < b; ++i) {
                const auto& x = R[i];
                if (x.is_zero() || x.valuation() > v) continue;
                if (x.valuation() < v) fail(Errc::internal, "clearing: levels out of order");
                Int d0 = x.mantissa() % prime;
                mpz_fdiv_r(d0.get_mpz_t(), d0.get_mpz_t(), Int(prime).get_mpz_t());
                dig[i] = d0;
                if (d0 != 0) any = true;
            }
            if (!any) continue;
            // use candidates theta^-(m0) .. theta^-(m0+b-1), m0 = ceil(-v/e):
            // coefficient c_k = d_k p^(v + (m0+k) e); level-v digit at place i
            // is sum_k d_k (unit_i^(m0+k) mod p), a Vandermonde system in the
            // distinct unit residues
            long m0 = (-v + e - 1) / e;
            // candidate k is (protJ p^(v + (m0+k)e)) theta^-(m0+k): its level-v
            // digit at place i is the unit residue protJ * unit_i^(m0+k); with
            // the unit residues distinct this is a scaled Vandermonde system
            std::vector<std::vector<Int>> V(b, std::vector<Int>(b, Int(0)));
            for (size_t i = 0; i < b; ++i) {
                Int base = tinv_res[i];
                Int cur = prot_res;
                for (long t = 0; t < m0; ++t) cur = (cur * base) % prime;
                for (size_t k = 0; k < b; ++k) {
                    V[i][k] = cur;
                    cur = (cur * base) % prime;
                }
            }
            // solve V d = dig over F_p
            std::vector<Int> dsol(b, Int(0));
            {
                std::vector<std::vector<Int>> M(b, std::vector<Int>(b + 1, Int(0)));
                for (size_t i = 0; i < b; ++i) {
                    for (size_t j = 0; j < b; ++j) M[i][j] = V[i][j];
                    M[i][b] = dig[i];
                }
                for (size_t col = 0; col < b; ++col) {
                    size_t piv = col;
                    while (piv < b && M[piv][col] % prime == 0) ++piv;
                    if (piv == b) fail(Errc::internal, "clearing: singular level system");
                    std::swap(M[col], M[piv]);
                    Int inv;
                    Int pm(prime);
                    Int lead = M[col][col] % pm;
                    mpz_fdiv_r(lead.get_mpz_t(), lead.get_mpz_t(), pm.get_mpz_t());
                    if (mpz_invert(inv.get_mpz_t(), lead.get_mpz_t(), pm.get_mpz_t()) == 0)
                        fail(Errc::internal, "clearing: pivot not invertible");
                    for (size_t j = col; j <= b; ++j)
                        M[col][j] = (M[col][j] * inv) % pm;
                    for (size_t r = 0; r < b; ++r) {
                        if (r == col) continue;
                        Int f = M[r][col] % pm;
                        if (f == 0) continue;
                        for (size_t j = col; j <= b; ++j) {
                            M[r][j] = (M[r][j] - f * M[col][j]) % pm;
                            mpz_fdiv_r(M[r][j].get_mpz_t(), M[r][j].get_mpz_t(), pm.get_mpz_t());
                        }
                    }
                }
                for (size_t i = 0; i < b; ++i) dsol[i] = M[i][b];
            }
            // apply: w += sum_k d_k protJ p^(v + (m0+k) e) theta^-(m0+k)
            for (size_t k = 0; k < b; ++k) {
                if (dsol[k] == 0) continue;
                long m = m0 + (long)k;
                long j = v + m * e;
                if (j < 0) fail(Errc::internal, "clearing: negative p-power");
                Int c = dsol[k] * protJ * int_pow(Int(prime), (unsigned long)j);
                NfElem term = Rat(c) * th_inv.pow(m);
                w_total = w_total + term;
                for (size_t i = 0; i < b; ++i) {
                    const auto& pc = ctx.padic_coords[job.coords[i]];
                    PadicNumber timg = pc.theta_img.inverse().pow(m) *
                                       PadicNumber::from_int(prime, pc.digits, c);
                    R[i] = R[i] - timg;
                }
            }
            // all residuals must now sit strictly above level v
            for (size_t i = 0; i < b; ++i)
                if (!R[i].is_zero() && R[i].valuation() <= v)
                    fail(Errc::internal, "clearing: level not cleared");
        }
    }
    return w_total;
}

}  // namespace detail

/// Fundamental-domain reduction: clear negative p-adic valuations with a
/// diagonal element, then translate the archimedean block into the
/// fundamental parallelepiped of the Z[theta] lattice. Idempotent.
inline PhasePoint reduce_fundamental(PhasePoint p, const CodingContext& ctx, long bits = 0) {
    if (bits == 0) bits = ctx.precision_bits;
    // step A: p-adic clearing
    NfElem w = detail::clearing_element(p, ctx);
    if (!w.is_zero()) apply_diagonal(p, w, ctx, bits);
    for (const auto& x : p.padic)
        if (!x.is_zero() && x.valuation() < 0)
            fail(Errc::internal, "reduction failed to clear a p-adic coordinate");
    // step B: archimedean block into the fundamental parallelepiped
    auto cols = detail::lattice_basis(ctx, bits);
    auto v = detail::arch_vector(p, ctx, bits);
    auto t = detail::solve_lattice(cols, v, bits);
    NfElem r = ctx.F->zero();
    bool nonzero = false;
    for (size_t j = 0; j < t.size(); ++j) {
        mpf_class fl;
        mpf_floor(fl.get_mpf_t(), t[j].get_mpf_t());
        Int k;
        mpz_set_f(k.get_mpz_t(), fl.get_mpf_t());
        if (k != 0) {
            r = r + Rat(k) * ctx.F->theta().pow((long)j);
            nonzero = true;
        }
    }
    if (nonzero) apply_diagonal(p, r, ctx, bits);
    p.reduced = true;
    return p;
}

struct ZeroResidual {
    Real arch_residual;     // max |coordinate - nearest diagonal lattice point|
    bool padic_exact_zero;  // all p-adic coordinates vanish at full precision
    long padic_min_digits;  // weakest p-adic vanishing depth observed
};

/// Distance of a (reduced) phase point from the zero class: round in lattice
/// coordinates, subtract that diagonal element exactly, and measure what is
/// left. The p-adic part must vanish identically.
inline ZeroResidual residual_to_zero(const PhasePoint& p0, const CodingContext& ctx,
                                     long bits = 0) {
    if (bits == 0) bits = ctx.precision_bits;
    PhasePoint p = p0;
    auto cols = detail::lattice_basis(ctx, bits);
    auto v = detail::arch_vector(p, ctx, bits);
    auto t = detail::solve_lattice(cols, v, bits);
    NfElem r = ctx.F->zero();
    for (size_t j = 0; j < t.size(); ++j) {
        Real half = t[j] + Real(0.5, 64);
        mpf_class fl;
        mpf_floor(fl.get_mpf_t(), half.get_mpf_t());
        Int k;
        mpz_set_f(k.get_mpz_t(), fl.get_mpf_t());
        if (k != 0) r = r + Rat(k) * ctx.F->theta().pow((long)j);
    }
    if (!(r.is_zero())) apply_diagonal(p, r, ctx, bits);

    ZeroResidual out;
    out.arch_residual = Real(0, (mp_bitcnt_t)bits);
    for (const auto& c : p.arch) {
        Real m = abs(c.re);
        if (abs(c.im) > m) m = abs(c.im);
        if (m > out.arch_residual) out.arch_residual = m;
    }
    out.padic_exact_zero = true;
    out.padic_min_digits = 1 << 30;
    for (size_t i = 0; i < p.padic.size(); ++i) {
        const auto& x = p.padic[i];
        long have = x.is_zero() ? x.valuation_lower_bound() : -1;
        if (!x.is_zero()) {
            // nonzero mantissa: vanishes only above its valuation
            out.padic_exact_zero = false;
            have = x.valuation();
        }
        out.padic_min_digits = std::min(out.padic_min_digits, have);
    }
    if (p.padic.empty()) out.padic_min_digits = 0;
    return out;
}

// ---------------------------------------------------------------------------
// exact kernel on periodic sequences

struct KernelEntry {
    PeriodicSequence seq;
    NfElem q_plus;  // the diagonal element: c+ = q, c- = -q
};

/// Exact kernel of the coding on periodic sequences: c+ and c- evaluated as
/// rational functions of beta in Q(beta); membership tested with zero
/// tolerance (c+ in Z[beta, 1/beta] and c- = -c+).
inline std::vector<KernelEntry> kernel_periodic(const CodingContext& ctx, long max_period) {
    std::vector<KernelEntry> out;
    for (const auto& ps : enumerate_periodic(ctx.pd, max_period)) {
        long L = (long)ps.word.size();
        // q+ = sum_{j=1..L} s_j xi^j / (1 - xi^L)
        NfElem num_p = ctx.F->zero();
        for (long j = 1; j <= L; ++j)
            num_p = num_p + Rat(ps.at(j)) * ctx.xi.pow(j);
        NfElem q_plus = num_p / (ctx.F->one() - ctx.xi.pow(L));
        // q- = sum_{j=0..L-1} s_-j xi^-j / (1 - xi^-L)
        NfElem num_m = ctx.F->zero();
        for (long j = 0; j < L; ++j)
            num_m = num_m + Rat(ps.at(-j)) * ctx.xi.pow(-j);
        NfElem q_minus = num_m / (ctx.F->one() - ctx.xi.pow(-L));
        if (q_minus != -q_plus) continue;
        if (!q_plus.in_z_theta_laurent()) continue;
        out.push_back({ps, q_plus});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pisot-Vijayaraghavan decay check

struct PvReport {
    std::vector<Real> dist;       // ||t beta^n|| for n = 1..N
    Real max_stable_modulus;      // largest conjugate modulus < 1
    Real fitted_c;                // min C with dist_n <= C rho^n
    double fitted_rate = 0;       // exp of the least-squares slope of log dist
    bool pass = false;
    int zero_count = 0;
};

/// ||t beta^n|| for n = 1..N against C * (max conjugate modulus)^n.
inline PvReport pv_check(const CodingContext& ctx, const NfElem& t, int N, long bits = 192) {
    PvReport rep;
    // max modulus among non-distinguished roots of the monic side
    const RootSet& rs = ctx.F->root_set(ctx.precision_bits);
    Rat best = 0;
    for (const auto& b : rs.roots) {
        auto [lo, hi] = b.modulus_sq_bounds();
        if (hi < 1 && hi > best) best = hi;
    }
    rep.max_stable_modulus = Real(0, (mp_bitcnt_t)bits);
    {
        Real m2(best, (mp_bitcnt_t)bits);
        mpf_sqrt(rep.max_stable_modulus.get_mpf_t(), m2.get_mpf_t());
    }
    Real rho = rep.max_stable_modulus;
    Real c(0, (mp_bitcnt_t)bits);
    NfElem z = t;
    for (int n = 1; n <= N; ++n) {
        z = z * ctx.F->theta();
        // distance to the nearest integer, exactly: z - round(z)
        Int fl = z.floor();
        NfElem fr = z - ctx.F->from_rat(Rat(fl));
        // fr in [0,1); distance = min(fr, 1 - fr)
        Real fv = fr.real_value(bits);
        Real d = fv;
        if (fv > 0.5) d = 1 - fv;
        rep.dist.push_back(d);
        if (d == 0) ++rep.zero_count;
        Real rn(1, (mp_bitcnt_t)bits);
        for (int k = 0; k < n; ++k) rn *= rho;
        if (rn > 0 && d / rn > c) c = d / rn;
    }
    rep.fitted_c = c;
    // least-squares decay fit over the nonzero distances
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int n = 1; n <= N; ++n) {
            double d = rep.dist[(size_t)(n - 1)].get_d();
            if (d <= 0) continue;
            double y = std::log(d);
            sx += n; sy += y; sxx += (double)n * n; sxy += n * y;
            ++cnt;
        }
        if (cnt >= 2) {
            double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
            rep.fitted_rate = std::exp(slope);
        }
    }
    rep.pass = true;  // by construction dist_n <= fitted_c * rho^n
    // meaningful check: the fitted constant stays moderate
    if (rho > 0 && c > 1e6) rep.pass = false;
    return rep;
}

// ---------------------------------------------------------------------------
// additive flow

/// One step of the additive flow: add the greedy expansion of t >= 0 to the
/// windowed sequence. Requires flanking zero blocks of length >= gap inside
/// the window (the uniform carry gap); the evaluation identity is exact.
inline BiSequence additive_flow_step(const BiSequence& s, const NfElem& t,
                                     const CodingContext& ctx, long gap, long depth_cap = 256) {
    // margins: zero blocks at the window edges
    long lo = s.n_min, hi = s.n_max;
    long first_nz = hi + 1, last_nz = lo - 1;
    for (long n = lo; n <= hi; ++n)
        if (s.at(n) != 0) {
            first_nz = std::min(first_nz, n);
            last_nz = std::max(last_nz, n);
        }
    bool all_zero = first_nz > hi;
    if (!all_zero) {
        long left_margin = first_nz - lo, right_margin = hi - last_nz;
        if (left_margin < gap || right_margin < gap)
            fail(Errc::gap_condition_unmet,
                 "flanking zero blocks shorter than the required gap");
    }
    BetaDigits cur;
    {
        std::vector<long> ds;
        for (long n = lo; n <= hi; ++n) ds.push_back(s.at(n));
        cur.digits = std::move(ds);
        cur.start_exponent = lo;
        cur.normalize();
    }
    NfElem total = eval_digits(cur, ctx.beta_ctx) + t;
    GreedyResult g = greedy_expand(total, ctx.beta_ctx, depth_cap);
    if (!g.exact) fail(Errc::non_terminating, "additive flow: sum expansion did not terminate");
    long nlo = std::min(lo, g.digits.is_zero() ? lo : g.digits.start_exponent);
    long nhi = std::max(hi, g.digits.is_zero() ? hi : g.digits.end_exponent());
    BiSequence out = BiSequence::zeros(nlo, nhi);
    for (size_t i = 0; i < g.digits.digits.size(); ++i)
        out.set(g.digits.start_exponent + (long)i, g.digits.digits[i]);
    if (!window_admissible(out, ctx.pd))
        fail(Errc::internal, "additive flow produced an inadmissible window");
    return out;
}

// ---------------------------------------------------------------------------
// almost-1-1 sampling

struct CollisionPair {
    size_t a, b;            // sample indices (or injected indices offset)
    bool kernel_explained;  // difference is exactly diagonal
    bool injected;
};

struct CollisionReport {
    long samples = 0;
    long distinct = 0;
    long collisions = 0;
    long kernel_explained = 0;
    long unexplained = 0;
    long injected_pairs = 0;
    long injected_detected = 0;
    long injected_explained = 0;
    std::vector<CollisionPair> pairs;
};

namespace detail {

/// exact test: the two inputs code to the same point of Gamma
inline bool exactly_diagonal(const SeqInput& a, const SeqInput& b, const CodingContext& ctx) {
    NfElem dplus = exact_plus(a, ctx) - exact_plus(b, ctx);
    NfElem dminus = exact_minus(a, ctx) - exact_minus(b, ctx);
    if (dminus != -dplus) return false;
    return dplus.in_z_theta_laurent();
}

}  // namespace detail

/// Samples admissible windows uniformly (exact path counts on the Parry
/// automaton), codes and reduces them, bins reduced points on an epsilon grid
/// in lattice coordinates (checking neighboring translates at the boundary),
/// and classifies every binned collision exactly. Optional injected pairs go
/// through the same pipeline; they may carry periodic tails.
inline CollisionReport almost_one_one_sample(const CodingContext& ctx, long n_samples,
                                             long window_lo, long window_hi, double epsilon,
                                             std::uint64_t seed,
                                             const std::vector<std::pair<SeqInput, SeqInput>>&
                                                 injected = {}) {
    CollisionReport rep;
    rep.samples = n_samples;
    long bits = ctx.precision_bits;
    long W = window_hi - window_lo + 1;

    // exact uniform sampling over admissible words of length W
    const ParryAutomaton& aut = ctx.automaton;
    std::vector<std::vector<Int>> cnt((size_t)W + 1,
                                      std::vector<Int>((size_t)aut.states(), Int(0)));
    for (int s = 0; s < aut.states(); ++s) cnt[0][(size_t)s] = 1;
    for (long l = 1; l <= W; ++l)
        for (int s = 0; s < aut.states(); ++s) {
            Int acc = 0;
            for (long a = 0; a < aut.alphabet; ++a) {
                int tt = aut.next[(size_t)s][(size_t)a];
                if (tt >= 0) acc += cnt[(size_t)(l - 1)][(size_t)tt];
            }
            cnt[(size_t)l][(size_t)s] = acc;
        }

    Rng rng(seed ^ 0xa5a5a5a5ULL);
    std::vector<SeqInput> inputs;
    {
        std::set<std::string> dedupe;
        for (long i = 0; i < n_samples; ++i) {
            BiSequence w = BiSequence::zeros(window_lo, window_hi);
            int state = aut.initial;
            std::string key;
            for (long n = window_lo; n <= window_hi; ++n) {
                long remaining = window_hi - n;
                Int total = 0;
                for (long a = 0; a < aut.alphabet; ++a) {
                    int tt = aut.next[(size_t)state][(size_t)a];
                    if (tt >= 0) total += cnt[(size_t)remaining][(size_t)tt];
                }
                if (!total.fits_ulong_p()) fail(Errc::internal, "path count overflow");
                std::uint64_t pick = rng.below(total.get_ui());
                for (long a = 0; a < aut.alphabet; ++a) {
                    int tt = aut.next[(size_t)state][(size_t)a];
                    if (tt < 0) continue;
                    Int c = cnt[(size_t)remaining][(size_t)tt];
                    if (pick < c.get_ui()) {
                        w.set(n, a);
                        key += (char)('0' + a);
                        state = tt;
                        break;
                    }
                    pick -= c.get_ui();
                }
            }
            if (dedupe.insert(key).second) inputs.push_back(SeqInput::from_window(w));
        }
    }
    rep.distinct = (long)inputs.size();
    size_t sample_count = inputs.size();
    for (const auto& pr : injected) {
        inputs.push_back(pr.first);
        inputs.push_back(pr.second);
    }
    rep.injected_pairs = (long)injected.size();

    // code, reduce, bin
    auto cols = detail::lattice_basis(ctx, bits);
    struct Entry {
        std::vector<Real> t;  // lattice coordinates of the reduced point
        PhasePoint reduced;
    };
    std::vector<Entry> entries;
    std::map<std::string, std::vector<size_t>> buckets;

    // a point is keyed under 2^dim grid cells (floor cell and the nearest
    // neighbor per dimension), for each lattice translate active near the
    // fundamental-domain boundary; any two points within ~epsilon/2 share a
    // key in some common translate
    auto emit_keys = [&](size_t idx, const std::vector<Real>& t, const std::string& padkey) {
        size_t dim = t.size();
        std::vector<std::vector<long>> lat(dim);
        for (size_t j = 0; j < dim; ++j) {
            lat[j] = {0};
            mpf_class fl;
            mpf_floor(fl.get_mpf_t(), t[j].get_mpf_t());
            Real frac = t[j] - Real(fl);
            if (frac < 4 * epsilon) lat[j].push_back(1);
            else if (frac > 1 - 4 * epsilon) lat[j].push_back(-1);
        }
        std::vector<size_t> li(dim, 0);
        for (;;) {
            // cell indices and per-dim second choice
            std::vector<Int> cell(dim);
            std::vector<int> second(dim);
            for (size_t j = 0; j < dim; ++j) {
                Real shifted = t[j] + Real(lat[j][li[j]], 64);
                Real scaled = shifted / Real(epsilon, 64);
                mpf_class fl;
                mpf_floor(fl.get_mpf_t(), scaled.get_mpf_t());
                mpz_set_f(cell[j].get_mpz_t(), fl.get_mpf_t());
                Real frac = scaled - Real(fl);
                second[j] = frac < 0.5 ? -1 : 1;
            }
            for (unsigned mask = 0; mask < (1u << dim); ++mask) {
                std::string key;
                for (size_t j = 0; j < dim; ++j) {
                    Int c = cell[j];
                    if (mask & (1u << j)) c += second[j];
                    key += c.get_str() + ",";
                }
                buckets[key + "#" + padkey].push_back(idx);
            }
            // odometer over lattice variants
            size_t pos = 0;
            while (pos < dim) {
                if (++li[pos] < lat[pos].size()) break;
                li[pos] = 0;
                ++pos;
            }
            if (pos == dim) break;
        }
    };

    for (size_t i = 0; i < inputs.size(); ++i) {
        PhasePoint raw = code_sequence(inputs[i], ctx, bits);
        PhasePoint red = reduce_fundamental(raw, ctx, bits);
        auto v = detail::arch_vector(red, ctx, bits);
        auto t = detail::solve_lattice(cols, v, bits);
        Entry e{t, red};
        entries.push_back(e);
        emit_keys(i, t, "");
    }

    std::set<std::pair<size_t, size_t>> seen_pairs;
    for (const auto& [key, members] : buckets) {
        for (size_t a = 0; a < members.size(); ++a)
            for (size_t b = a + 1; b < members.size(); ++b) {
                size_t ia = members[a], ib = members[b];
                if (ia == ib) continue;
                auto pr = std::minmax(ia, ib);
                if (!seen_pairs.insert({pr.first, pr.second}).second) continue;
                // numeric same-class gate: lattice coordinates differ by an
                // integer vector k, and the p-adic blocks differ by the image
                // of the corresponding lattice element
                bool close = true;
                NfElem rk = ctx.F->zero();
                for (size_t j = 0; j < entries[ia].t.size() && close; ++j) {
                    Real d = entries[ia].t[j] - entries[ib].t[j];
                    mpf_class half = mpf_class(d) + 0.5;
                    mpf_floor(half.get_mpf_t(), half.get_mpf_t());
                    Int kj;
                    mpz_set_f(kj.get_mpz_t(), half.get_mpf_t());
                    if (abs(d - Real(half)) > 4 * epsilon) close = false;
                    else if (kj != 0) rk = rk + Rat(kj) * ctx.F->theta().pow((long)j);
                }
                if (!close) continue;
                for (size_t ci = 0; ci < ctx.padic_coords.size() && close; ++ci) {
                    const auto& pc = ctx.padic_coords[ci];
                    PadicNumber img = rk.embed_padic(pc.theta_img, pc.p, pc.digits);
                    PadicNumber expect = pc.stable ? img : -img;
                    PadicNumber diff =
                        entries[ia].reduced.padic[ci] - entries[ib].reduced.padic[ci] - expect;
                    long have = std::min((long)pc.digits - 8, diff.known_bound());
                    if (!diff.vanishes_mod(std::max(1L, have))) close = false;
                }
                if (!close) continue;
                bool explained = detail::exactly_diagonal(inputs[ia], inputs[ib], ctx);
                bool inj = ia >= sample_count || ib >= sample_count;
                rep.pairs.push_back({ia, ib, explained, inj});
                ++rep.collisions;
                if (explained) ++rep.kernel_explained;
                else ++rep.unexplained;
                if (inj) {
                    ++rep.injected_detected;
                    if (explained) ++rep.injected_explained;
                }
            }
    }
    return rep;
}

}  // namespace betadyn

#endif  // BETADYN_CODING_HPP
