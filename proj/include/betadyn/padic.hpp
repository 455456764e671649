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

#ifndef BETADYN_PADIC_HPP
#define BETADYN_PADIC_HPP

#include <string>
#include <vector>

#include "common.hpp"

namespace betadyn {

/// Floating-style p-adic number: value = p^val * (u + O(p^prec)) with u a
/// unit mantissa in [0, p^prec). `prec` is the number of known base-p digits;
/// it shrinks when cancellation eats leading digits. An (approximate) zero
/// carries the guarantee v_p(value) >= val.
class PadicNumber {
   public:
    PadicNumber() = default;
    PadicNumber(long p, int max_digits) : p_(p), cap_(max_digits), zero_(true), val_(max_digits) {}

    static PadicNumber from_int(long p, int max_digits, const Int& n) {
        PadicNumber x(p, max_digits);
        if (n == 0) { x.zero_ = true; x.val_ = max_digits * 4; return x; }
        Int m = n;
        long v = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), (unsigned long)p)) { m /= p; ++v; }
        x.zero_ = false;
        x.val_ = v;
        x.prec_ = max_digits;
        x.u_ = mod_pow(m, p, max_digits);
        return x;
    }

    static PadicNumber from_rat(long p, int max_digits, const Rat& q) {
        if (q == 0) return from_int(p, max_digits, 0);
        PadicNumber num = from_int(p, max_digits, q.get_num());
        PadicNumber den = from_int(p, max_digits, q.get_den());
        return num * den.inverse();
    }

    long prime() const { return p_; }
    bool is_zero() const { return zero_; }
    long valuation() const {
        if (zero_) fail(Errc::internal, "valuation of (approximate) zero");
        return val_;
    }
    /// v_p(value) >= this, always valid
    long valuation_lower_bound() const { return val_; }
    int known_digits() const { return zero_ ? 0 : prec_; }
    const Int& mantissa() const { return u_; }

    /// value is congruent to 0 modulo p^k
    bool vanishes_mod(long k) const {
        if (zero_) return val_ >= k;
        if (val_ >= k) return true;
        if (val_ + prec_ < k) fail(Errc::precision_exhausted, "p-adic precision too low for zero test");
        return false;  // nonzero unit digits below k
    }

    PadicNumber operator-() const {
        PadicNumber r = *this;
        if (!r.zero_) r.u_ = mod_reduce(-r.u_, p_, r.prec_);
        return r;
    }

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
        a.check_compat(b);
        if (a.zero_ && b.zero_) {
            PadicNumber r(a.p_, a.cap_);
            r.val_ = std::min(a.val_, b.val_);
            return r;
        }
        if (a.zero_) return b.truncate_known(a.val_);
        if (b.zero_) return a.truncate_known(b.val_);
        long lo = std::min(a.val_, b.val_);
        long known = std::min(a.val_ + a.prec_, b.val_ + b.prec_);
        long digits = known - lo;
        if (digits <= 0) {
            PadicNumber r(a.p_, a.cap_);
            r.val_ = known;
            return r;
        }
        Int m = a.u_ * pow_p(a.p_, a.val_ - lo) + b.u_ * pow_p(b.p_, b.val_ - lo);
        m = mod_reduce(m, a.p_, (int)digits);
        return make(a.p_, a.cap_, lo, m, (int)digits);
    }
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
        a.check_compat(b);
        PadicNumber r(a.p_, a.cap_);
        if (a.zero_ || b.zero_) {
            // v(a*b) >= bound_a + bound_b
            long bound_a = a.zero_ ? a.val_ : a.val_;
            long bound_b = b.zero_ ? b.val_ : b.val_;
            r.val_ = bound_a + bound_b;
            return r;
        }
        int digits = std::min(a.prec_, b.prec_);
        Int m = mod_reduce(a.u_ * b.u_, a.p_, digits);
        return make(a.p_, a.cap_, a.val_ + b.val_, m, digits);
    }

    PadicNumber inverse() const {
        if (zero_) fail(Errc::internal, "p-adic inverse of zero");
        PadicNumber r(p_, cap_);
        r.zero_ = false;
        r.val_ = -val_;
        r.prec_ = prec_;
        Int mod = pow_p(p_, prec_);
        if (mpz_invert(r.u_.get_mpz_t(), u_.get_mpz_t(), mod.get_mpz_t()) == 0)
            fail(Errc::internal, "p-adic inverse: mantissa not a unit");
        return r;
    }

    PadicNumber pow(long e) const {
        if (e == 0) return from_int(p_, cap_, 1);
        PadicNumber base = e < 0 ? inverse() : *this;
        unsigned long n = (unsigned long)(e < 0 ? -e : e);
        PadicNumber acc = from_int(p_, cap_, 1);
        while (n) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    friend bool operator==(const PadicNumber& a, const PadicNumber& b) {
        return (a - b).vanishes_mod(std::min(a.known_bound(), b.known_bound()));
    }

    /// base-p digits, least significant first, of p^val * u
    std::string to_string() const {
        if (zero_) return "0 (mod p^" + std::to_string(val_) + ")";
        std::string s;
        Int m = u_;
        for (int i = 0; i < prec_; ++i) {
            Int d = m % p_;
            s += (i ? "," : "") + d.get_str();
            m /= p_;
        }
        return "p^" + std::to_string(val_) + "*(" + s + ")";
    }

    long known_bound() const { return zero_ ? val_ : val_ + prec_; }

   private:
    long p_ = 0;
    int cap_ = 0;
    bool zero_ = true;
    long val_ = 0;   // for zero: v_p >= val_
    int prec_ = 0;   // known digits of u_
    Int u_ = 0;      // unit mantissa in [0, p^prec)

    static Int pow_p(long p, long e) {
        Int r;
        mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)p, (unsigned long)e);
        return r;
    }
    static Int mod_reduce(const Int& m, long p, int digits) {
        Int mod = pow_p(p, digits), r;
        mpz_fdiv_r(r.get_mpz_t(), m.get_mpz_t(), mod.get_mpz_t());
        return r;
    }
    static Int mod_pow(const Int& m, long p, int digits) { return mod_reduce(m, p, digits); }

    static PadicNumber make(long p, int cap, long val, Int m, int digits) {
        PadicNumber r(p, cap);
        if (m == 0) { r.zero_ = true; r.val_ = val + digits; return r; }
        long t = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), (unsigned long)p)) { m /= p; ++t; }
        r.zero_ = false;
        r.val_ = val + t;
        r.prec_ = (int)std::min<long>(digits - t, cap);
        if (r.prec_ <= 0) { r.zero_ = true; r.val_ = val + digits; r.prec_ = 0; r.u_ = 0; return r; }
        r.u_ = mod_reduce(m, p, r.prec_);
        return r;
    }

    PadicNumber truncate_known(long bound) const {
        // value + O(p^bound)
        if (zero_) { PadicNumber r = *this; r.val_ = std::min(val_, bound); return r; }
        if (val_ >= bound) { PadicNumber r(p_, cap_); r.val_ = bound; return r; }
        PadicNumber r = *this;
        long digits = std::min<long>(prec_, bound - val_);
        r.prec_ = (int)digits;
        r.u_ = mod_reduce(u_, p_, (int)digits);
        return r;
    }

    void check_compat(const PadicNumber& o) const {
        if (p_ != o.p_) fail(Errc::internal, "mixed primes in p-adic arithmetic");
    }
};

/// Newton lift of a simple root of g modulo p to precision p^digits.
/// g is given by ascending integer coefficients; g'(r0) must be a unit mod p.
inline Int hensel_lift_root(const std::vector<Int>& g, long p, const Int& r0, int digits) {
    Int mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), (unsigned long)p, (unsigned long)digits);
    auto eval = [&](const std::vector<Int>& c, const Int& x, const Int& m) {
        Int r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            r = (r * x + *it) % m;
        }
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        return r;
    };
    std::vector<Int> dg;
    for (size_t i = 1; i < g.size(); ++i) dg.push_back(Int((long)i) * g[i]);

    Int dp0 = eval(dg, r0, Int(p));
    if (dp0 == 0) fail(Errc::hensel_failure, "local factor not simple modulo p");

    Int r = r0;
    for (int k = 0; k < digits + 2; ++k) {  // quadratic convergence; generous cap
        Int fx = eval(g, r, mod);
        if (fx == 0) break;
        Int dfx = eval(dg, r, mod);
        Int dinv;
        // invert the unit part of dfx mod p^digits
        if (mpz_invert(dinv.get_mpz_t(), dfx.get_mpz_t(), mod.get_mpz_t()) == 0)
            fail(Errc::hensel_failure, "derivative not invertible during lift");
        r = (r - fx * dinv) % mod;
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
    }
    if (eval(g, r, mod) != 0) fail(Errc::hensel_failure, "lift did not converge");
    return r;
}

}  // namespace betadyn

#endif  // BETADYN_PADIC_HPP
