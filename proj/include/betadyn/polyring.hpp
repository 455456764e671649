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

#ifndef BETADYN_POLYRING_HPP
#define BETADYN_POLYRING_HPP

#include <vector>

#include "common.hpp"
#include "laurent.hpp"
#include "places.hpp"
#include "roots.hpp"

namespace betadyn {

/// Finite window of a real-coefficient Laurent series whose coefficients
/// decay geometrically outside the window. Tail bound: |c_n| <= C+ rho+^n for
/// n beyond n_max, |c_-m| <= C- rho-^m beyond n_min.
struct RealLaurentWindow {
    long n_min = 0, n_max = 0;
    std::vector<Real> coeffs;  // index e - n_min
    Real tail_c_pos, tail_rho_pos;
    Real tail_c_neg, tail_rho_neg;
    long precision_bits = 128;

    Real coeff(long e) const {
        if (e < n_min || e > n_max) return Real(0, (mp_bitcnt_t)precision_bits);
        return coeffs[(size_t)(e - n_min)];
    }
    /// upper bound on |c_e| for e outside the window
    Real tail_bound(long e) const {
        Real b(0, (mp_bitcnt_t)precision_bits);
        if (e > n_max) {
            b = tail_c_pos;
            for (long i = 0; i < e; ++i) b *= tail_rho_pos;
        } else if (e < n_min) {
            b = tail_c_neg;
            for (long i = 0; i < -e; ++i) b *= tail_rho_neg;
        }
        return b;
    }
};

/// Coefficients of the Laurent expansion of 1/f on the annulus containing
/// |x| = 1: unstable roots (|r| > 1) contribute positive powers, stable roots
/// (|r| < 1) negative powers (1/(x-r) = sum r^j x^(-1-j)). Partial fractions
/// over the isolated roots; repeated factors handled by windowed convolution.
inline RealLaurentWindow inverse_laurent_coeffs(const AssociatedPoly& f, long n_min, long n_max,
                                                long precision_bits = 128) {
    if (!is_hyperbolic(f).value)
        fail(Errc::not_hyperbolic, "inverse_laurent_coeffs: f not hyperbolic");
    long bits = precision_bits + 64;

    QPoly fq = QPoly::from_assoc(f);
    auto parts = squarefree_decomposition(fq);

    // window for a single square-free factor g (scaled integer coefficients)
    auto window_of = [&](const AssociatedPoly& g, long lo, long hi) {
        RootSet rs = isolate_roots(g, bits);
        RealLaurentWindow w;
        w.n_min = lo;
        w.n_max = hi;
        w.precision_bits = precision_bits;
        w.coeffs.assign((size_t)(hi - lo + 1), Real(0, (mp_bitcnt_t)bits));
        Real c_pos(0, (mp_bitcnt_t)bits), c_neg(0, (mp_bitcnt_t)bits);
        Real rho_pos(0, (mp_bitcnt_t)bits), rho_neg(0, (mp_bitcnt_t)bits);
        for (const auto& b : rs.roots) {
            CF r = CF::with_prec(bits);
            r.re = Real(b.re, (mp_bitcnt_t)bits);
            r.im = Real(b.im, (mp_bitcnt_t)bits);
            // A = 1/g'(r)
            CF dp = CF::with_prec(bits), p = CF::with_prec(bits);
            {
                std::vector<Int> gc = g.coeffs();
                detail::eval_cf(gc, r, bits, p, dp);
            }
            CF A = CF::with_prec(bits);
            A.re = 1;
            A = A / dp;
            Real absr(0, (mp_bitcnt_t)bits);
            mpf_sqrt(absr.get_mpf_t(), Real(r.norm2()).get_mpf_t());
            Real absA(0, (mp_bitcnt_t)bits);
            mpf_sqrt(absA.get_mpf_t(), Real(A.norm2()).get_mpf_t());

            auto [lo_sq, hi_sq] = b.modulus_sq_bounds();
            bool stable = hi_sq < 1;
            if (stable) {
                // A/(x - r) = A sum_{j>=0} r^j x^(-1-j)
                CF pw = CF::with_prec(bits);
                pw.re = 1;
                for (long m = 1; m <= -lo; ++m) {
                    // coefficient at x^-m gains A r^(m-1)
                    if (-m <= hi && -m >= lo) {
                        CF term = A * pw;
                        w.coeffs[(size_t)(-m - lo)] += term.re;  // imaginary parts cancel in conjugate pairs
                    }
                    pw = pw * r;
                }
                c_neg += absA / absr;
                if (absr > rho_neg) rho_neg = absr;
            } else {
                // A/(x - r) = -A sum_{n>=0} x^n / r^(n+1)
                CF rinv = CF::with_prec(bits);
                rinv.re = 1;
                rinv = rinv / r;
                CF pw = rinv;
                for (long n = 0; n <= hi; ++n) {
                    if (n >= lo) {
                        CF term = A * pw;
                        w.coeffs[(size_t)(n - lo)] -= term.re;
                    }
                    pw = pw * rinv;
                }
                Real arinv = 1 / absr;
                c_pos += absA * arinv;
                if (arinv > rho_pos) rho_pos = arinv;
            }
        }
        w.tail_c_pos = c_pos;
        w.tail_rho_pos = rho_pos;
        w.tail_c_neg = c_neg;
        w.tail_rho_neg = rho_neg;
        return w;
    };

    if (parts.size() == 1 && parts[0].degree() == f.degree()) {
        return window_of(f, n_min, n_max);
    }

    // repeated factors: convolve windows of each square-free power
    long margin = 32;
    RealLaurentWindow acc;
    bool first = true;
    for (size_t pi = 0; pi < parts.size(); ++pi) {
        if (parts[pi].degree() <= 0) continue;
        AssociatedPoly g(qpoly_primitive(parts[pi]));
        for (int rep = 0; rep < (int)pi + 1; ++rep) {
            RealLaurentWindow w = window_of(g, n_min - margin, n_max + margin);
            if (first) {
                acc = w;
                first = false;
                continue;
            }
            RealLaurentWindow next;
            next.n_min = std::max(acc.n_min, w.n_min);
            next.n_max = std::min(acc.n_max, w.n_max);
            next.precision_bits = precision_bits;
            next.coeffs.assign((size_t)(next.n_max - next.n_min + 1), Real(0, (mp_bitcnt_t)bits));
            for (long e = next.n_min; e <= next.n_max; ++e) {
                Real s(0, (mp_bitcnt_t)bits);
                for (long j = acc.n_min; j <= acc.n_max; ++j) {
                    long k = e - j;
                    if (k < w.n_min || k > w.n_max) continue;
                    s += acc.coeff(j) * w.coeff(k);
                }
                next.coeffs[(size_t)(e - next.n_min)] = s;
            }
            // coarse but valid geometric tail: decay dominated by the slower factor,
            // with a safety bump to absorb the polynomial term of the convolution
            auto bump = [&](const Real& rho) {
                Real r(rho);
                r = (r + 1) / 2;
                return r;
            };
            next.tail_rho_pos = bump(std::max(mpf_class(acc.tail_rho_pos), mpf_class(w.tail_rho_pos)));
            next.tail_rho_neg = bump(std::max(mpf_class(acc.tail_rho_neg), mpf_class(w.tail_rho_neg)));
            next.tail_c_pos = acc.tail_c_pos * w.tail_c_pos * 64;
            next.tail_c_neg = acc.tail_c_neg * w.tail_c_neg * 64;
            acc = next;
        }
    }
    // crop to requested window
    RealLaurentWindow out = acc;
    out.n_min = n_min;
    out.n_max = n_max;
    out.coeffs.assign((size_t)(n_max - n_min + 1), Real(0, (mp_bitcnt_t)bits));
    for (long e = n_min; e <= n_max; ++e) out.coeffs[(size_t)(e - n_min)] = acc.coeff(e);
    return out;
}

/// max over the inner window of |(f * w) - delta_0|; the defining identity
/// of 1/f up to the reported tail.
inline Real convolve_check(const AssociatedPoly& f, const RealLaurentWindow& w) {
    int d = f.degree();
    Real worst(0, (mp_bitcnt_t)w.precision_bits + 64);
    for (long e = w.n_min + d; e <= w.n_max; ++e) {
        Real s(0, (mp_bitcnt_t)w.precision_bits + 64);
        for (int i = 0; i <= d; ++i) s += Real(f[i], 64) * w.coeff(e - i);
        if (e == 0) s -= 1;
        if (abs(s) > worst) worst = abs(s);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// digit reduction modulo f: g = f h + r with r in B(N-1), N = sum |a_i|

struct DigitReduceResult {
    IntLaurentPoly h, r;
    bool complete;  // every coefficient of r certified in [0, N-1]
};

namespace detail {

/// exact path for degree-1 f: the series coefficients of g/f are rational
inline DigitReduceResult digit_reduce_linear(const IntLaurentPoly& g, const AssociatedPoly& f) {
    DigitReduceResult out;
    Rat a0(f[0]), a1(f[1]);
    Rat root = -a0 / a1;
    bool stable = rat_abs(root) < 1;
    if (rat_abs(root) == 1) fail(Errc::internal, "digit_reduce: root on the unit circle");

    std::map<long, Int> hmap;
    if (stable) {
        // 1/f = (1/a1) sum_{m>=1} root^(m-1) x^-m. Coefficient of x^k in g/f
        // obeys r_k = root r_{k+1} + g_{k+1}/a1, walked downward from the top.
        Rat rk = 0;
        for (long k = g.max_exp() - 1;; --k) {
            rk = root * rk + Rat(g.coeff(k + 1)) / a1;
            if (k < g.min_exp() && rat_abs(rk) < 1) {
                // pure geometric from here on: floors vanish iff rk stays in [0,1)
                out.complete = (rk == 0) || (root > 0 && rk >= 0);
                break;
            }
            Int fl = rat_floor(rk);
            if (fl != 0) hmap[k] = fl;
        }
    } else {
        // 1/f = -(1/a0) sum_{n>=0} x^n root^-n; r_k = r_{k-1}/root - g_k/a0 upward
        Rat rinv = 1 / root;
        Rat rk = 0;
        for (long k = g.min_exp();; ++k) {
            rk = rinv * rk - Rat(g.coeff(k)) / a0;
            if (k > g.max_exp() && rat_abs(rk) < 1) {
                out.complete = (rk == 0) || (rinv > 0 && rk >= 0);
                break;
            }
            Int fl = rat_floor(rk);
            if (fl != 0) hmap[k] = fl;
        }
    }
    out.h = IntLaurentPoly::from_map(hmap);
    out.r = g - f.to_laurent() * out.h;
    if (out.complete) {
        Int n = f.coeff_abs_sum();
        for (const auto& [e, c] : out.r.terms())
            if (c < 0 || c >= n) out.complete = false;
    }
    return out;
}

}  // namespace detail

/// Floor-based reduction from the covering lemma for B(N): h = floor
/// coefficients of g/f over an adaptive window, r = g - f h exact. When every
/// coefficient of r lands in [0, N-1] the reduction is complete; inputs whose
/// reduction has no finite form (the series floors never vanish) come back
/// with complete = false and the exact identity still holding.
inline DigitReduceResult digit_reduce(const IntLaurentPoly& g, const AssociatedPoly& f) {
    DigitReduceResult out;
    if (g.is_zero()) {
        out.complete = true;
        return out;
    }
    if (f.degree() == 1) return detail::digit_reduce_linear(g, f);

    Int n = f.coeff_abs_sum();
    for (long margin = 16;; margin *= 2) {
        long lo = g.min_exp() - margin, hi = g.max_exp() + margin;
        RealLaurentWindow w = inverse_laurent_coeffs(f, lo - g.max_exp(), hi - g.min_exp(), 192);
        std::map<long, Int> hmap;
        for (long k = lo; k <= hi; ++k) {
            Real rk(0, 256);
            for (const auto& [j, c] : g.terms()) rk += Real(c, 64) * w.coeff(k - j);
            // floor from the numeric value; exactness is re-established below
            mpf_class fl;
            mpf_floor(fl.get_mpf_t(), rk.get_mpf_t());
            Int flz;
            mpz_set_f(flz.get_mpz_t(), fl.get_mpf_t());
            if (flz != 0) hmap[k] = flz;
        }
        out.h = IntLaurentPoly::from_map(hmap);
        out.r = g - f.to_laurent() * out.h;
        out.complete = true;
        for (const auto& [e, c] : out.r.terms())
            if (c < 0 || c >= n) out.complete = false;
        if (out.complete || margin >= 256) return out;
    }
}

/// log |a_d| + sum over |root| > 1 of log |root| (natural log).
inline Real mahler_entropy(const AssociatedPoly& f, long precision_bits = 160) {
    RootSet rs = isolate_roots(f, precision_bits);
    long bits = precision_bits + 32;
    Real acc = mpf_log(Real(f.leading(), (mp_bitcnt_t)bits), bits);
    for (const auto& b : rs.roots) {
        auto [lo, hi] = b.modulus_sq_bounds();
        if (hi <= 1) continue;
        // log sqrt(|r|^2); straddling boxes contribute O(2^-precision)
        Real m2(hi, (mp_bitcnt_t)bits);
        Real lg = mpf_log(m2, bits) / 2;
        if (sgn(lg) > 0)
            for (int k = 0; k < b.mult; ++k) acc += lg;
    }
    return acc;
}

}  // namespace betadyn

#endif  // BETADYN_POLYRING_HPP
