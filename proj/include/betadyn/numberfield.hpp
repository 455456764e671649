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

#ifndef BETADYN_NUMBERFIELD_HPP
#define BETADYN_NUMBERFIELD_HPP

#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "laurent.hpp"
#include "padic.hpp"
#include "places.hpp"
#include "qpoly.hpp"
#include "roots.hpp"

namespace betadyn {

class NfElem;

/// Q[x]/(fhat) for a monic irreducible fhat, with a distinguished real root
/// theta > 0 used for order decisions (for Pisot fields: the Pisot root).
/// Elements are rational vectors in the power basis 1, theta, ..., theta^(d-1).
class NumberField : public std::enable_shared_from_this<NumberField> {
   public:
    static std::shared_ptr<const NumberField> create(const AssociatedPoly& fhat) {
        if (!fhat.monic()) fail(Errc::internal, "NumberField: defining polynomial not monic");
        return std::shared_ptr<const NumberField>(new NumberField(fhat));
    }

    const AssociatedPoly& poly() const { return fhat_; }
    int degree() const { return d_; }

    NfElem zero() const;
    NfElem one() const;
    NfElem from_rat(const Rat& q) const;
    NfElem theta() const;      // the generator
    NfElem theta_inv() const;  // exact inverse of the generator
    NfElem from_coords(std::vector<Rat> c) const;
    /// image of an integer Laurent polynomial under x -> theta
    NfElem eval_laurent(const IntLaurentPoly& g) const;

    /// certified interval for the distinguished real root, width <= 2^-bits
    std::pair<Rat, Rat> theta_interval(long bits) const {
        std::lock_guard<std::mutex> lock(mu_);
        refine_locked(bits);
        return {theta_box_.re - theta_box_.rad, theta_box_.re + theta_box_.rad};
    }

    /// all roots of fhat at the requested precision (copy: sharable across threads)
    RootSet root_set(long bits) const {
        std::lock_guard<std::mutex> lock(mu_);
        refine_locked(bits);
        return roots_;
    }

   private:
    explicit NumberField(const AssociatedPoly& fhat) : fhat_(fhat), d_(fhat.degree()) {
        refine_locked(128);
    }

    void refine_locked(long bits) const {
        if (root_bits_ >= bits) return;
        roots_ = isolate_roots(fhat_, bits);
        root_bits_ = bits;
        // distinguished root: the largest real root (Pisot fields: the Pisot
        // root; degree-1 fields: the rational root)
        bool found = false;
        for (const auto& b : roots_.roots) {
            if (!b.is_real()) continue;
            if (!found || b.re > theta_box_.re) {
                theta_box_ = b;
                found = true;
            }
        }
        if (!found) fail(Errc::internal, "NumberField: no real root for ordering");
    }

    AssociatedPoly fhat_;
    int d_;
    mutable std::mutex mu_;
    mutable RootSet roots_;
    mutable long root_bits_ = 0;
    mutable RootBox theta_box_;

    friend class NfElem;
};

/// Element of a NumberField: rational coordinates in the power basis.
class NfElem {
   public:
    NfElem() = default;
    NfElem(std::shared_ptr<const NumberField> f, std::vector<Rat> c)
        : F_(std::move(f)), c_(std::move(c)) {
        c_.resize((size_t)F_->degree(), Rat(0));
    }

    const std::vector<Rat>& coords() const { return c_; }
    const std::shared_ptr<const NumberField>& field() const { return F_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    const Rat& rational_part() const { return c_[0]; }

    bool integral_coords() const {
        for (const auto& x : c_)
            if (x.get_den() != 1) return false;
        return true;
    }

    friend NfElem operator+(const NfElem& a, const NfElem& b) {
        a.check(b);
        std::vector<Rat> c = a.c_;
        for (size_t i = 0; i < c.size(); ++i) c[i] += b.c_[i];
        return NfElem(a.F_, std::move(c));
    }
    friend NfElem operator-(const NfElem& a, const NfElem& b) {
        a.check(b);
        std::vector<Rat> c = a.c_;
        for (size_t i = 0; i < c.size(); ++i) c[i] -= b.c_[i];
        return NfElem(a.F_, std::move(c));
    }
    NfElem operator-() const {
        std::vector<Rat> c = c_;
        for (auto& x : c) x = -x;
        return NfElem(F_, std::move(c));
    }
    friend NfElem operator*(const NfElem& a, const NfElem& b) {
        a.check(b);
        int d = a.F_->degree();
        std::vector<Rat> prod((size_t)(2 * d - 1), Rat(0));
        for (int i = 0; i < d; ++i) {
            if (a.c_[(size_t)i] == 0) continue;
            for (int j = 0; j < d; ++j) {
                if (b.c_[(size_t)j] == 0) continue;
                prod[(size_t)(i + j)] += a.c_[(size_t)i] * b.c_[(size_t)j];
            }
        }
        // reduce modulo the monic fhat
        const auto& f = a.F_->poly();
        for (int k = 2 * d - 2; k >= d; --k) {
            Rat t = prod[(size_t)k];
            if (t == 0) continue;
            prod[(size_t)k] = 0;
            for (int i = 0; i < d; ++i) prod[(size_t)(k - d + i)] -= t * Rat(f[i]);
        }
        prod.resize((size_t)d);
        return NfElem(a.F_, std::move(prod));
    }
    friend NfElem operator*(const Rat& s, const NfElem& a) {
        std::vector<Rat> c = a.c_;
        for (auto& x : c) x *= s;
        return NfElem(a.F_, std::move(c));
    }
    friend bool operator==(const NfElem& a, const NfElem& b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const NfElem& a, const NfElem& b) { return !(a == b); }

    NfElem inverse() const {
        if (is_zero()) fail(Errc::internal, "NfElem: inverse of zero");
        // extended euclid of (this, fhat) over Q[x]
        QPoly a(std::vector<Rat>(c_.begin(), c_.end()));
        QPoly m = QPoly::from_assoc(F_->poly());
        QPoly r0 = m, r1 = a;
        QPoly s0, s1 = QPoly::constant(Rat(1));
        while (!r1.is_zero() && r1.degree() > 0) {
            auto [q, r2] = qpoly_divmod(r0, r1);
            QPoly s2 = s0 - q * s1;
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (r1.is_zero()) fail(Errc::internal, "NfElem: not invertible (reducible modulus?)");
        Rat g = r1.c[0];
        std::vector<Rat> inv((size_t)F_->degree(), Rat(0));
        for (size_t i = 0; i < s1.c.size() && i < inv.size(); ++i) inv[i] = s1.c[i] / g;
        return NfElem(F_, std::move(inv));
    }
    friend NfElem operator/(const NfElem& a, const NfElem& b) { return a * b.inverse(); }

    NfElem pow(long e) const {
        NfElem base = e < 0 ? inverse() : *this;
        unsigned long n = (unsigned long)(e < 0 ? -e : e);
        NfElem acc = F_->one();
        while (n) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    /// exact interval under the distinguished real embedding, refined until
    /// width <= 2^-bits (or exact)
    std::pair<Rat, Rat> interval(long bits) const {
        Rat target = rat_pow(Rat(1, 2), bits);
        long b = 96;
        for (int i = 0; i < 12; ++i, b *= 2) {
            auto [lo, hi] = interval_at(b);
            if (hi - lo <= target) return {lo, hi};
        }
        fail(Errc::precision_exhausted, "NfElem interval did not converge");
    }

    Real real_value(long bits) const {
        auto [lo, hi] = interval(bits + 8);
        Real v(0, (mp_bitcnt_t)(bits + 16));
        v = Real(Rat(lo + hi) / 2, (mp_bitcnt_t)(bits + 16));
        return v;
    }

    /// exact sign under the distinguished real embedding
    int sign() const {
        if (is_zero()) return 0;
        long b = 96;
        for (int i = 0; i < 16; ++i, b *= 2) {
            auto [lo, hi] = interval_at(b);
            if (lo > 0) return 1;
            if (hi < 0) return -1;
        }
        fail(Errc::precision_exhausted, "NfElem sign undecidable at cap");
    }
    friend bool operator<(const NfElem& a, const NfElem& b) { return (a - b).sign() < 0; }
    friend bool operator>(const NfElem& a, const NfElem& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const NfElem& a, const NfElem& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const NfElem& a, const NfElem& b) { return (a - b).sign() >= 0; }

    /// floor under the distinguished real embedding, exact
    Int floor() const {
        auto [lo, hi] = interval(8);
        Int n = rat_floor(lo);
        for (;;) {
            // z in [n, n+1)?
            NfElem zn = *this - F_->from_rat(Rat(n));
            int s = zn.is_zero() ? 0 : zn.sign();
            if (s < 0) { n -= 1; continue; }
            NfElem zn1 = *this - F_->from_rat(Rat(n + 1));
            int s1 = zn1.is_zero() ? 0 : zn1.sign();
            if (s1 >= 0) { n += 1; continue; }
            return n;
        }
    }

    /// complex embedding at a given root box of the defining polynomial
    CF embed_arch(const RootBox& theta_image, long bits) const {
        CF t = CF::with_prec(bits);
        t.re = Real(theta_image.re, (mp_bitcnt_t)bits);
        t.im = Real(theta_image.im, (mp_bitcnt_t)bits);
        CF acc = CF::with_prec(bits);
        for (size_t i = c_.size(); i-- > 0;) {
            acc = acc * t;
            acc.re += Real(c_[i], (mp_bitcnt_t)bits);
        }
        return acc;
    }

    /// p-adic embedding given the p-adic image of theta
    PadicNumber embed_padic(const PadicNumber& theta_image, long p, int digits) const {
        PadicNumber acc(p, digits);
        for (size_t i = c_.size(); i-- > 0;) {
            acc = acc * theta_image;
            acc = acc + PadicNumber::from_rat(p, digits, c_[i]);
        }
        return acc;
    }

    /// membership in Z[theta, 1/theta]: multiply by theta until the
    /// coordinates are integral; a revisited fractional state proves
    /// non-membership. Exact and terminating (the fractional orbit lives in
    /// the finite group (1/D)L/L).
    bool in_z_theta_laurent(long cap = 200000) const {
        NfElem z = *this;
        std::set<std::string> seen;
        NfElem th = F_->theta();
        for (long i = 0; i < cap; ++i) {
            if (z.integral_coords()) return true;
            std::string key;
            for (const auto& x : z.c_) {
                Rat fr = x - Rat(rat_floor(x));
                key += fr.get_str();
                key += '|';
            }
            if (!seen.insert(key).second) return false;
            z = z * th;
        }
        fail(Errc::precision_exhausted, "ring membership: orbit cap exceeded");
    }

    /// normal form z = theta^-scale * (integer combination), minimal scale;
    /// only valid after in_z_theta_laurent
    std::pair<long, std::vector<Int>> theta_scaled_integers(long cap = 200000) const {
        NfElem z = *this;
        NfElem th = F_->theta();
        for (long m = 0; m < cap; ++m) {
            if (z.integral_coords()) {
                std::vector<Int> v;
                for (const auto& x : z.c_) v.push_back(x.get_num());
                return {m, v};
            }
            z = z * th;
        }
        fail(Errc::internal, "theta_scaled_integers: not in the ring");
    }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += c_[i].get_str();
            if (i >= 1) s += "*b";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

   private:
    std::shared_ptr<const NumberField> F_;
    std::vector<Rat> c_;

    void check(const NfElem& o) const {
        if (F_.get() != o.F_.get()) fail(Errc::internal, "mixed number fields");
    }

    // interval Horner at root precision `bits`
    std::pair<Rat, Rat> interval_at(long bits) const {
        auto [a, b] = F_->theta_interval(bits);
        Rat lo = 0, hi = 0;
        for (size_t i = c_.size(); i-- > 0;) {
            // [lo,hi] * [a,b] + c_i
            Rat c1 = lo * a, c2 = lo * b, c3 = hi * a, c4 = hi * b;
            Rat nlo = c1, nhi = c1;
            for (const Rat& t : {c2, c3, c4}) {
                if (t < nlo) nlo = t;
                if (t > nhi) nhi = t;
            }
            lo = nlo + c_[i];
            hi = nhi + c_[i];
        }
        return {lo, hi};
    }
};

inline NfElem NumberField::zero() const {
    return NfElem(shared_from_this(), std::vector<Rat>((size_t)d_, Rat(0)));
}
inline NfElem NumberField::one() const { return from_rat(Rat(1)); }
inline NfElem NumberField::from_rat(const Rat& q) const {
    std::vector<Rat> c((size_t)d_, Rat(0));
    c[0] = q;
    return NfElem(shared_from_this(), std::move(c));
}
inline NfElem NumberField::theta() const {
    std::vector<Rat> c((size_t)d_, Rat(0));
    if (d_ == 1) c[0] = -Rat(fhat_[0]);
    else c[1] = 1;
    return NfElem(shared_from_this(), std::move(c));
}
inline NfElem NumberField::theta_inv() const {
    // theta^-1 = -(a_1 + a_2 theta + ... + theta^(d-1)) / a_0, fhat monic
    if (d_ == 1) return from_rat(Rat(-1) / Rat(fhat_[0]));
    std::vector<Rat> c((size_t)d_, Rat(0));
    for (int i = 1; i <= d_; ++i) {
        Rat ai = (i == d_) ? Rat(1) : Rat(fhat_[i]);
        c[(size_t)(i - 1)] = -ai / Rat(fhat_[0]);
    }
    return NfElem(shared_from_this(), std::move(c));
}
inline NfElem NumberField::from_coords(std::vector<Rat> c) const {
    return NfElem(shared_from_this(), std::move(c));
}
inline NfElem NumberField::eval_laurent(const IntLaurentPoly& g) const {
    NfElem acc = zero();
    NfElem th = theta();
    for (const auto& [e, coef] : g.terms()) acc = acc + Rat(coef) * th.pow(e);
    return acc;
}

}  // namespace betadyn

#endif  // BETADYN_NUMBERFIELD_HPP
