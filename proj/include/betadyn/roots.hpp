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

#ifndef BETADYN_ROOTS_HPP
#define BETADYN_ROOTS_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "common.hpp"
#include "laurent.hpp"
#include "qpoly.hpp"

namespace betadyn {

/// Arbitrary-precision complex value.
struct CF {
    Real re, im;
    CF() : re(0, 64), im(0, 64) {}
    CF(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    static CF with_prec(long bits) { return CF(Real(0, (mp_bitcnt_t)bits), Real(0, (mp_bitcnt_t)bits)); }
    friend CF operator+(const CF& a, const CF& b) { return CF(a.re + b.re, a.im + b.im); }
    friend CF operator-(const CF& a, const CF& b) { return CF(a.re - b.re, a.im - b.im); }
    friend CF operator*(const CF& a, const CF& b) {
        return CF(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend CF operator/(const CF& a, const CF& b) {
        Real d = b.re * b.re + b.im * b.im;
        return CF((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
    }
    Real norm2() const { return re * re + im * im; }
};

/// One isolated root: certified to lie within `rad` of (re, im); rad == 0
/// means the root is exactly rational (or exactly on the real axis and
/// rational). Boxes centered on the real axis (im == 0) contain real roots.
struct RootBox {
    Rat re, im;
    Rat rad;  // rigorous enclosure radius, exact rational
    int mult = 1;
    bool exact = false;  // rad == 0, root == (re, im) exactly

    bool is_real() const { return im == 0; }

    /// rigorous bounds on |root|^2
    std::pair<Rat, Rat> modulus_sq_bounds() const {
        Rat n2 = re * re + im * im;
        if (exact) return {n2, n2};
        // | |root| - |z| | <= rad, so |root|^2 in [(|z|-rad)^2, (|z|+rad)^2].
        // Work with s >= |z|: s = rad + a rational upper bound on |z|.
        Rat s = upper_abs();
        Rat hi = n2 + 2 * s * rad + rad * rad;
        Rat lo = n2 - 2 * s * rad;  // >= (|z|-rad)^2 - ... safe lower bound
        if (lo < 0) lo = 0;
        return {lo, hi};
    }

    /// rational upper bound on |(re, im)|
    Rat upper_abs() const;
};

struct RootSet {
    std::vector<RootBox> roots;  // conjugates included; count with mult = degree
    long precision_bits = 0;
};

namespace detail {

inline std::vector<std::complex<double>> aberth(const std::vector<double>& c) {
    int d = (int)c.size() - 1;
    std::vector<std::complex<double>> z((size_t)d);
    double r = std::pow(std::abs(c[0] / c[(size_t)d]), 1.0 / d);
    if (!(r > 0) || !std::isfinite(r)) r = 1.0;
    for (int i = 0; i < d; ++i) {
        double th = 2 * 3.14159265358979323846 * i / d + 0.3964;
        z[(size_t)i] = std::polar(r, th);
    }
    auto eval = [&](std::complex<double> x, std::complex<double>& p, std::complex<double>& dp) {
        p = 0;
        dp = 0;
        for (int i = d; i >= 0; --i) {
            dp = dp * x + p;
            p = p * x + c[(size_t)i];
        }
    };
    for (int iter = 0; iter < 300; ++iter) {
        double moved = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> p, dp;
            eval(z[(size_t)i], p, dp);
            if (std::abs(p) == 0) continue;
            std::complex<double> w = dp == std::complex<double>(0) ? std::complex<double>(1e-30)
                                                                   : p / dp;
            std::complex<double> s = 0;
            for (int j = 0; j < d; ++j)
                if (j != i) s += 1.0 / (z[(size_t)i] - z[(size_t)j]);
            std::complex<double> corr = w / (1.0 - w * s);
            z[(size_t)i] -= corr;
            moved = std::max(moved, std::abs(corr));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

// Horner evaluation of an integer polynomial at a CF point
inline void eval_cf(const std::vector<Int>& c, const CF& x, long bits, CF& p, CF& dp) {
    p = CF::with_prec(bits);
    dp = CF::with_prec(bits);
    for (int i = (int)c.size() - 1; i >= 0; --i) {
        dp = dp * x + p;
        p = p * x;
        p.re += Real(c[(size_t)i], (mp_bitcnt_t)bits);
    }
}

// exact evaluation of integer poly and derivative at rational complex point
inline void eval_exact(const std::vector<Int>& c, const Rat& re, const Rat& im, Rat& pre,
                       Rat& pim, Rat& dre, Rat& dim) {
    pre = 0; pim = 0; dre = 0; dim = 0;
    for (int i = (int)c.size() - 1; i >= 0; --i) {
        // d = d*x + p ; p = p*x + c_i
        Rat ndre = dre * re - dim * im + pre;
        Rat ndim = dre * im + dim * re + pim;
        dre = ndre; dim = ndim;
        Rat npre = pre * re - pim * im + Rat(c[(size_t)i]);
        Rat npim = pre * im + pim * re;
        pre = npre; pim = npim;
    }
}

// Rational upper bound for sqrt(x), x >= 0. mpf estimate with a relative
// bump, verified exactly; keeps operand sizes bounded (a pure rational
// Newton iteration squares them every step).
inline Rat rat_sqrt_upper(const Rat& x) {
    if (x == 0) return Rat(0);
    mpf_class f(x, 320);
    mpf_sqrt(f.get_mpf_t(), f.get_mpf_t());
    Rat s(f);
    Rat bump(Int(1) + (Int(1) << 80), Int(1) << 80);
    s *= bump;
    while (s * s < x) s *= bump;
    return s;
}

}  // namespace detail

inline Rat RootBox::upper_abs() const {
    return detail::rat_sqrt_upper(re * re + im * im);
}

/// Isolates all complex roots of f with certified boxes of radius
/// <= 2^-precision_bits. Rational roots come out exact. Real and non-real
/// roots are rigorously separated (boxes with im == 0 hold real roots).
inline RootSet isolate_roots(const AssociatedPoly& f, long precision_bits = 128) {
    RootSet out;
    out.precision_bits = precision_bits;
    QPoly fq = QPoly::from_assoc(f);
    auto parts = squarefree_decomposition(fq);

    Rat target = rat_pow(Rat(1, 2), precision_bits);

    for (size_t pi = 0; pi < parts.size(); ++pi) {
        int mult = (int)pi + 1;
        QPoly part = parts[pi];
        if (part.degree() <= 0) continue;
        std::vector<Int> g = qpoly_primitive(part);

        // strip rational roots p/q, p | g0, q | glead (exact boxes)
        {
            bool again = true;
            while (again && g.size() > 1) {
                again = false;
                Int g0 = g.front(), gl = g.back();
                if (g0 == 0) {  // should not happen for associated polys
                    RootBox b; b.re = 0; b.im = 0; b.rad = 0; b.exact = true; b.mult = mult;
                    out.roots.push_back(b);
                    g.erase(g.begin());
                    again = true;
                    continue;
                }
                std::vector<Int> ps, qs;
                for (Int p = 1; p * p <= abs(g0); ++p)
                    if (abs(g0) % p == 0) { ps.push_back(p); ps.push_back(abs(g0) / p); }
                for (Int q = 1; q * q <= abs(gl); ++q)
                    if (abs(gl) % q == 0) { qs.push_back(q); qs.push_back(abs(gl) / q); }
                for (const Int& p : ps) {
                    for (const Int& q : qs) {
                        for (int s = -1; s <= 1 && !again; s += 2) {
                            Rat cand(s * p, q);
                            cand.canonicalize();
                            QPoly gq(std::vector<Rat>(g.begin(), g.end()));
                            if (gq.eval(cand) == 0) {
                                RootBox b;
                                b.re = cand; b.im = 0; b.rad = 0; b.exact = true; b.mult = mult;
                                out.roots.push_back(b);
                                // deflate exactly: g / (q x - p)
                                QPoly lin(std::vector<Rat>{Rat(-cand.get_num()), Rat(cand.get_den())});
                                auto [quo, rem] = qpoly_divmod(gq, lin);
                                if (!rem.is_zero()) fail(Errc::internal, "exact deflation failed");
                                g = qpoly_primitive(quo);
                                again = true;
                            }
                        }
                        if (again) break;
                    }
                    if (again) break;
                }
            }
        }
        int d = (int)g.size() - 1;
        if (d <= 0) continue;

        // numeric isolation of the irrational part, retried at rising precision
        long work = std::max(precision_bits + 96, 192L);
        for (int attempt = 0;; ++attempt, work *= 2) {
            if (attempt > 6) fail(Errc::precision_exhausted, "root isolation did not certify");
            std::vector<double> cd(g.size());
            for (size_t i = 0; i < g.size(); ++i) cd[i] = g[i].get_d();
            auto approx = detail::aberth(cd);

            std::vector<RootBox> boxes;
            bool ok = true;
            for (const auto& z0 : approx) {
                if (z0.imag() < -1e-12) continue;  // keep upper half + reals
                bool treat_real = std::abs(z0.imag()) <= 1e-9;
                CF z = CF::with_prec(work);
                z.re = Real(z0.real(), (mp_bitcnt_t)work);
                z.im = Real(treat_real ? 0.0 : z0.imag(), (mp_bitcnt_t)work);
                // Newton
                Real thr(1, (mp_bitcnt_t)work);
                mpf_div_2exp(thr.get_mpf_t(), thr.get_mpf_t(), (mp_bitcnt_t)(2 * work - 8));
                for (int it = 0; it < 200; ++it) {
                    CF p, dp;
                    detail::eval_cf(g, z, work, p, dp);
                    if (dp.norm2() == 0) { ok = false; break; }
                    CF step = p / dp;
                    z = z - step;
                    if (treat_real) z.im = Real(0, (mp_bitcnt_t)work);
                    Real sn = step.norm2();
                    if (sn == 0 || sn < thr) break;
                }
                if (!ok) break;
                // exact certification: min dist to a root <= d |g(z)/g'(z)|
                Rat zre(mpf_class(z.re)), zim(mpf_class(z.im));
                zre.canonicalize(); zim.canonicalize();
                Rat pre, pim, dre, dim;
                detail::eval_exact(g, zre, zim, pre, pim, dre, dim);
                Rat dnorm = dre * dre + dim * dim;
                if (dnorm == 0) { ok = false; break; }
                Rat b2 = Rat(d) * Rat(d) * (pre * pre + pim * pim) / dnorm;
                Rat rad = detail::rat_sqrt_upper(b2);
                while (rad * rad < b2) rad *= 2;  // enforce rad^2 >= b2
                RootBox box;
                box.re = zre; box.im = zim; box.rad = rad; box.mult = mult;
                box.exact = false;
                boxes.push_back(std::move(box));
            }
            if (ok) {
                // assemble: real boxes + conjugate mirrors of im>0 boxes
                std::vector<RootBox> all;
                int n_real = 0, n_upper = 0;
                for (auto& b : boxes) {
                    if (b.im == 0) { ++n_real; all.push_back(b); }
                    else if (b.im > 0) {
                        ++n_upper;
                        all.push_back(b);
                        RootBox m = b; m.im = -m.im;
                        all.push_back(m);
                    }
                }
                ok = (n_real + 2 * n_upper == d);
                // precision target
                if (ok)
                    for (const auto& b : all)
                        if (b.rad > target) { ok = false; break; }
                // complex boxes must not touch the real axis
                if (ok)
                    for (const auto& b : all)
                        if (b.im != 0 && rat_abs(b.im) <= b.rad) { ok = false; break; }
                // pairwise disjoint (exact squared distances)
                if (ok) {
                    for (size_t i = 0; i < all.size() && ok; ++i)
                        for (size_t j = i + 1; j < all.size() && ok; ++j) {
                            Rat dx = all[i].re - all[j].re, dy = all[i].im - all[j].im;
                            Rat dist2 = dx * dx + dy * dy;
                            Rat rsum = all[i].rad + all[j].rad;
                            if (dist2 <= rsum * rsum) ok = false;
                        }
                }
                if (ok) {
                    for (auto& b : all) out.roots.push_back(std::move(b));
                    break;
                }
            }
        }
    }

    // deterministic order: by (re, im) ascending
    std::sort(out.roots.begin(), out.roots.end(), [](const RootBox& a, const RootBox& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    });

    // consistency: count with multiplicity, all boxes pairwise disjoint
    {
        int n = 0;
        for (const auto& b : out.roots) n += b.mult;
        if (n != f.degree()) fail(Errc::internal, "root count mismatch");
        for (size_t i = 0; i < out.roots.size(); ++i)
            for (size_t j = i + 1; j < out.roots.size(); ++j) {
                Rat dx = out.roots[i].re - out.roots[j].re;
                Rat dy = out.roots[i].im - out.roots[j].im;
                Rat rsum = out.roots[i].rad + out.roots[j].rad;
                if (dx * dx + dy * dy <= rsum * rsum)
                    fail(Errc::precision_exhausted, "root boxes not separated");
            }
    }
    return out;
}

}  // namespace betadyn

#endif  // BETADYN_ROOTS_HPP
