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

#ifndef BETADYN_QPOLY_HPP
#define BETADYN_QPOLY_HPP

#include <utility>
#include <vector>

#include "common.hpp"
#include "laurent.hpp"

namespace betadyn {

/// Dense polynomial over Q, ascending coefficients. Exact arithmetic only;
/// this is the workhorse behind the boundary-exact hyperbolicity test, the
/// irreducibility search and number-field division.
struct QPoly {
    std::vector<Rat> c;  // c[i] multiplies x^i; normalized: no leading zeros

    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
    static QPoly constant(const Rat& v) {
        QPoly p;
        if (v != 0) p.c = {v};
        return p;
    }
    static QPoly from_assoc(const AssociatedPoly& f) {
        std::vector<Rat> v;
        v.reserve((size_t)f.degree() + 1);
        for (const auto& a : f.coeffs()) v.emplace_back(a);
        return QPoly(std::move(v));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return (int)c.size() - 1; }  // -1 for zero
    const Rat& lead() const { return c.back(); }

    Rat eval(const Rat& x) const {
        Rat r = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
        return r;
    }

    QPoly derivative() const {
        if (c.size() <= 1) return QPoly();
        std::vector<Rat> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = Rat((long)i) * c[i];
        return QPoly(std::move(d));
    }

    QPoly reversed() const {  // x^deg * p(1/x)
        std::vector<Rat> r(c.rbegin(), c.rend());
        return QPoly(std::move(r));
    }

    QPoly monic() const {
        if (is_zero()) return *this;
        QPoly r = *this;
        Rat l = lead();
        for (auto& a : r.c) a /= l;
        return r;
    }

    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return QPoly();
        std::vector<Rat> r(a.c.size() + b.c.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return QPoly(std::move(r));
    }
    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
        return QPoly(std::move(r));
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) {
        std::vector<Rat> r(std::max(a.c.size(), b.c.size()), Rat(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
        return QPoly(std::move(r));
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c == b.c; }
};

/// quotient/remainder with exact division over Q
inline std::pair<QPoly, QPoly> qpoly_divmod(const QPoly& a, const QPoly& b) {
    if (b.is_zero()) fail(Errc::internal, "division by zero polynomial");
    QPoly r = a, q;
    q.c.assign(a.c.size(), Rat(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        Rat f = r.lead() / b.lead();
        int shift = r.degree() - b.degree();
        q.c[(size_t)shift] += f;
        for (int i = 0; i <= b.degree(); ++i) r.c[(size_t)(i + shift)] -= f * b.c[(size_t)i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

inline bool qpoly_divides(const QPoly& b, const QPoly& a) {
    return qpoly_divmod(a, b).second.is_zero();
}

/// monic gcd over Q
inline QPoly qpoly_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = qpoly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r).monic();
    }
    return a.monic();
}

/// Primitive integer polynomial (positive leading coefficient) from a
/// rational one.
inline std::vector<Int> qpoly_primitive(const QPoly& p) {
    if (p.is_zero()) return {};
    Int den = 1;
    for (const auto& a : p.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.get_den().get_mpz_t());
    std::vector<Int> v;
    v.reserve(p.c.size());
    for (const auto& a : p.c) v.push_back(Int(a.get_num() * (den / a.get_den())));
    Int g = 0;
    for (const auto& a : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    bool neg = v.back() < 0;
    for (auto& a : v) a = neg ? Int(-a / g) : Int(a / g);
    return v;
}

/// Square-free decomposition f = prod part[i]^(i+1) (Yun's algorithm over Q,
/// monic parts).
inline std::vector<QPoly> squarefree_decomposition(const QPoly& f) {
    std::vector<QPoly> parts;
    if (f.degree() <= 0) return parts;
    QPoly a = f.monic();
    QPoly g = qpoly_gcd(a, a.derivative());
    QPoly w = qpoly_divmod(a, g).first;
    QPoly y = qpoly_divmod(a.derivative(), g).first;
    QPoly z = y - w.derivative();
    while (!w.is_zero() && w.degree() > 0) {
        QPoly p = qpoly_gcd(w, z);
        parts.push_back(p.monic());
        w = qpoly_divmod(w, p).first;
        z = qpoly_divmod(z, p).first - w.derivative();
    }
    return parts;
}

/// Number of distinct real roots of f in the open interval (a, b),
/// by Sturm's theorem. Requires f(a) != 0 and f(b) != 0.
inline int sturm_count_open(const QPoly& f, const Rat& a, const Rat& b) {
    QPoly sf = f;
    {  // square-free part
        QPoly g = qpoly_gcd(sf, sf.derivative());
        if (g.degree() > 0) sf = qpoly_divmod(sf, g).first;
    }
    std::vector<QPoly> chain{sf, sf.derivative()};
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        QPoly r = qpoly_divmod(chain[chain.size() - 2], chain.back()).second;
        for (auto& x : r.c) x = -x;
        r.trim();
        if (r.is_zero()) break;
        chain.push_back(std::move(r));
    }
    auto variations = [&](const Rat& x) {
        int v = 0, prev = 0;
        for (const auto& p : chain) {
            Rat val = p.eval(x);
            int s = sgn(val);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++v;
            prev = s;
        }
        return v;
    };
    if (f.eval(a) == 0 || f.eval(b) == 0)
        fail(Errc::internal, "sturm_count_open: root at interval endpoint");
    return variations(a) - variations(b);
}

}  // namespace betadyn

#endif  // BETADYN_QPOLY_HPP
