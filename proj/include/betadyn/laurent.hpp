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

#ifndef BETADYN_LAURENT_HPP
#define BETADYN_LAURENT_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace betadyn {

/// Integer Laurent polynomial, stored sparsely as (exponent, coefficient)
/// pairs with strictly increasing exponents and nonzero coefficients.
/// The zero polynomial has empty support.
class IntLaurentPoly {
   public:
    using Term = std::pair<long, Int>;

    IntLaurentPoly() = default;
    explicit IntLaurentPoly(const Int& c) {
        if (c != 0) terms_.emplace_back(0, c);
    }
    static IntLaurentPoly monomial(const Int& c, long e) {
        IntLaurentPoly p;
        if (c != 0) p.terms_.emplace_back(e, c);
        return p;
    }
    static IntLaurentPoly from_map(const std::map<long, Int>& m) {
        IntLaurentPoly p;
        for (const auto& [e, c] : m)
            if (c != 0) p.terms_.emplace_back(e, c);
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    long min_exp() const { return terms_.front().first; }
    long max_exp() const { return terms_.back().first; }

    Int coeff(long e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term& t, long x) { return t.first < x; });
        if (it != terms_.end() && it->first == e) return it->second;
        return Int(0);
    }

    IntLaurentPoly shifted(long k) const {
        IntLaurentPoly p(*this);
        for (auto& t : p.terms_) t.first += k;
        return p;
    }

    IntLaurentPoly operator-() const {
        IntLaurentPoly p(*this);
        for (auto& t : p.terms_) t.second = -t.second;
        return p;
    }

    friend IntLaurentPoly operator+(const IntLaurentPoly& a, const IntLaurentPoly& b) {
        std::map<long, Int> m;
        for (const auto& [e, c] : a.terms_) m[e] += c;
        for (const auto& [e, c] : b.terms_) m[e] += c;
        return from_map(m);
    }
    friend IntLaurentPoly operator-(const IntLaurentPoly& a, const IntLaurentPoly& b) {
        return a + (-b);
    }
    friend IntLaurentPoly operator*(const IntLaurentPoly& a, const IntLaurentPoly& b) {
        std::map<long, Int> m;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) m[ea + eb] += ca * cb;
        return from_map(m);
    }
    friend bool operator==(const IntLaurentPoly& a, const IntLaurentPoly& b) {
        return a.terms_ == b.terms_;
    }

    Int content() const {
        Int g = 0;
        for (const auto& [e, c] : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    std::string to_string() const;

   private:
    std::vector<Term> terms_;
};

/// The normalized generator of a principal ideal in Z[x, 1/x]: ordinary
/// polynomial, nonzero constant term, positive leading coefficient,
/// primitive. Coefficients ascending, a_0 .. a_d.
class AssociatedPoly {
   public:
    AssociatedPoly() = default;
    explicit AssociatedPoly(std::vector<Int> ascending) : c_(std::move(ascending)) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        if (c_.empty()) fail(Errc::zero_polynomial, "associated polynomial is zero");
        if (c_[0] == 0) fail(Errc::internal, "associated polynomial with zero constant term");
        if (c_.back() < 0) fail(Errc::internal, "associated polynomial with negative leading coefficient");
        Int g = 0;
        for (const auto& a : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        if (g != 1) fail(Errc::internal, "associated polynomial not primitive");
    }

    int degree() const { return (int)c_.size() - 1; }
    const Int& operator[](int i) const { return c_[(size_t)i]; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& constant() const { return c_.front(); }
    const Int& leading() const { return c_.back(); }
    bool monic() const { return c_.back() == 1; }

    IntLaurentPoly to_laurent() const {
        std::map<long, Int> m;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) m[(long)i] = c_[i];
        return IntLaurentPoly::from_map(m);
    }

    /// Sum of |a_i|; the N of the digit reduction bound B(N).
    Int coeff_abs_sum() const {
        Int n = 0;
        for (const auto& a : c_) n += abs(a);
        return n;
    }

    friend bool operator==(const AssociatedPoly& a, const AssociatedPoly& b) {
        return a.c_ == b.c_;
    }

    std::string to_string() const;

   private:
    std::vector<Int> c_;
};

/// Unique primitive generator with positive powers only, nonzero constant
/// term and positive leading coefficient, for the ideal (p) in Z[x, 1/x].
inline AssociatedPoly normalize_associated(const IntLaurentPoly& p) {
    if (p.is_zero()) fail(Errc::zero_polynomial, "normalize_associated: zero polynomial");
    long shift = p.min_exp();
    Int cont = p.content();
    bool negate = p.terms().back().second < 0;
    std::vector<Int> c((size_t)(p.max_exp() - shift) + 1, Int(0));
    for (const auto& [e, coef] : p.terms()) {
        Int v = coef / cont;
        c[(size_t)(e - shift)] = negate ? Int(-v) : v;
    }
    return AssociatedPoly(std::move(c));
}

/// normalize_associated(x^d * f(1/x)); involutive on AssociatedPoly.
inline AssociatedPoly reciprocal_poly(const AssociatedPoly& f) {
    std::vector<Int> rev(f.coeffs().rbegin(), f.coeffs().rend());
    if (rev.back() < 0)
        for (auto& a : rev) a = -a;
    return AssociatedPoly(std::move(rev));
}

// ---------------------------------------------------------------------------
// text forms: "x^2+2x-1", "x^-1+2", and ascending list "[-1,2,1]"

namespace detail {

inline void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
}

inline bool parse_long(const std::string& s, size_t& i, long& out) {
    skip_ws(s, i);
    size_t j = i;
    bool neg = false;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) {
        neg = s[j] == '-';
        ++j;
    }
    if (j >= s.size() || !std::isdigit((unsigned char)s[j])) return false;
    long v = 0;
    while (j < s.size() && std::isdigit((unsigned char)s[j])) {
        v = v * 10 + (s[j] - '0');
        ++j;
    }
    out = neg ? -v : v;
    i = j;
    return true;
}

}  // namespace detail

/// Parses "x^2+2x-1" style text (negative exponents allowed, optional '*'),
/// or an ascending coefficient list "[-1,2,1]".
inline IntLaurentPoly parse_laurent(const std::string& text) {
    using detail::skip_ws;
    size_t i = 0;
    skip_ws(text, i);
    if (i >= text.size()) fail(Errc::parse_error, "empty polynomial text");

    std::map<long, Int> m;
    if (text[i] == '[') {
        ++i;
        long e = 0;
        for (;;) {
            skip_ws(text, i);
            if (i < text.size() && text[i] == ']') {
                ++i;
                break;
            }
            size_t j = i;
            if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
            size_t k = j;
            while (k < text.size() && std::isdigit((unsigned char)text[k])) ++k;
            if (k == j) fail(Errc::parse_error, "bad coefficient list: " + text);
            m[e++] += Int(text.substr(i, k - i));
            i = k;
            skip_ws(text, i);
            if (i < text.size() && text[i] == ',') ++i;
        }
        skip_ws(text, i);
        if (i != text.size()) fail(Errc::parse_error, "trailing characters: " + text);
        return IntLaurentPoly::from_map(m);
    }

    bool expect_term = true;
    int sign = 1;
    while (i < text.size()) {
        skip_ws(text, i);
        if (i >= text.size()) break;
        char ch = text[i];
        if (ch == '+' || ch == '-') {
            if (expect_term && ch == '-') sign = -sign;
            else if (expect_term && ch == '+') { /* unary plus */ }
            else {
                sign = (ch == '-') ? -1 : 1;
            }
            expect_term = true;
            ++i;
            continue;
        }
        // a term: [coef][*][x[^exp]]
        Int coef = 1;
        bool saw_digits = false;
        {
            size_t j = i;
            while (j < text.size() && std::isdigit((unsigned char)text[j])) ++j;
            if (j > i) {
                coef = Int(text.substr(i, j - i));
                saw_digits = true;
                i = j;
            }
        }
        skip_ws(text, i);
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip_ws(text, i);
        }
        long exp = 0;
        if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
            ++i;
            exp = 1;
            skip_ws(text, i);
            if (i < text.size() && text[i] == '^') {
                ++i;
                if (!detail::parse_long(text, i, exp))
                    fail(Errc::parse_error, "bad exponent in: " + text);
            }
        } else if (!saw_digits) {
            fail(Errc::parse_error, "unexpected character in polynomial: " + text);
        }
        m[exp] += sign * coef;
        sign = 1;
        expect_term = false;
    }
    if (expect_term) fail(Errc::parse_error, "dangling sign in: " + text);
    return IntLaurentPoly::from_map(m);
}

inline AssociatedPoly parse_associated(const std::string& text) {
    return normalize_associated(parse_laurent(text));
}

inline std::string IntLaurentPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Int a = abs(c);
        if (!s.empty()) s += (c < 0) ? " - " : " + ";
        else if (c < 0) s += "-";
        if (a != 1 || e == 0) s += a.get_str();
        if (e != 0) {
            s += "x";
            if (e != 1) s += "^" + std::to_string(e);
        }
    }
    return s;
}

inline std::string AssociatedPoly::to_string() const { return to_laurent().to_string(); }

}  // namespace betadyn

#endif  // BETADYN_LAURENT_HPP
