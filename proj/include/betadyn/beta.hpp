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

#ifndef BETADYN_BETA_HPP
#define BETADYN_BETA_HPP

#include <map>
#include <string>
#include <vector>

#include "common.hpp"
#include "numberfield.hpp"
#include "places.hpp"

namespace betadyn {

/// Exact arithmetic context for one expansion base beta > 1: the number
/// field of the monic side (beta integral, the Pisot root), or plain Q when
/// only a rational base exists (e.g. beta = 3/2 for 2x - 3).
struct BetaContext {
    std::shared_ptr<const NumberField> F;
    NfElem beta;
    NfElem beta_inv;
    long digit_cap;              // alphabet {0, ..., digit_cap}
    AssociatedPoly minimal_poly; // defining polynomial of beta over Q
    bool beta_integral;          // beta is an algebraic integer

    Real beta_real(long bits) const { return beta.real_value(bits); }
};

/// Base for the beta-shift attached to f: the Pisot root of the monic side
/// when f is a Pisot automorphism polynomial; for degree-1 f the rational
/// root > 1 of f or of its reciprocal. NotPisot when no base > 1 exists.
inline BetaContext make_beta_context(const AssociatedPoly& f, long precision_bits = 128) {
    BetaContext ctx;
    PisotReport pr = pisot_classify(f, precision_bits);
    if (pr.found()) {
        ctx.F = NumberField::create(pr.monic_side);
        ctx.beta = ctx.F->theta();
        ctx.beta_inv = ctx.F->theta_inv();
        ctx.minimal_poly = pr.monic_side;
        ctx.beta_integral = true;
    } else if (f.degree() == 1) {
        Rat r(-f[0], f[1]);
        r.canonicalize();
        Rat base;
        if (r > 1) base = r;
        else if (r != 0 && rat_abs(r) < 1 && 1 / r > 1) base = 1 / r;
        else fail(Errc::not_pisot, "no real expansion base > 1 for this polynomial");
        // plain rational arithmetic; the ambient field is Q (any monic line works)
        ctx.F = NumberField::create(parse_associated("x-2"));
        ctx.beta = ctx.F->from_rat(base);
        ctx.beta_inv = ctx.F->from_rat(1 / base);
        ctx.minimal_poly = f;
        ctx.beta_integral = (base.get_den() == 1);
    } else {
        fail(Errc::not_pisot, "not a Pisot automorphism polynomial");
    }
    // digit cap = ceil(beta) - 1 (= floor(beta) for non-integral beta)
    Int bfloor = ctx.beta.floor();
    bool integer_beta = (ctx.beta - ctx.F->from_rat(Rat(bfloor))).is_zero();
    ctx.digit_cap = integer_beta ? bfloor.get_si() - 1 : bfloor.get_si();
    return ctx;
}

// ---------------------------------------------------------------------------
// Parry data: greedy and quasi-greedy expansions of 1

struct ParryData {
    std::vector<long> d1;           // greedy expansion of 1 when finite
    bool d1_finite = false;
    std::vector<long> dstar_pre;    // quasi-greedy d*(1) = pre (period)^inf
    std::vector<long> dstar_period;
    long digit_cap = 1;

    long dstar_at(size_t i) const {
        if (i < dstar_pre.size()) return dstar_pre[i];
        size_t j = (i - dstar_pre.size()) % dstar_period.size();
        return dstar_period[j];
    }
    size_t spine_length() const { return dstar_pre.size() + dstar_period.size(); }
};

/// Greedy expansion of 1 with exact remainders in Q(beta); eventual
/// periodicity detected by exact remainder repetition (guaranteed for Pisot
/// beta). PeriodCapExceeded reports honestly when the cap is hit.
inline ParryData parry_data(const BetaContext& ctx, long period_cap = 4096) {
    ParryData pd;
    pd.digit_cap = ctx.digit_cap;

    std::vector<long> digits;
    std::map<std::string, size_t> seen;  // remainder -> index after which it occurred
    NfElem r = ctx.F->one();
    for (long n = 0; n < period_cap; ++n) {
        NfElem t = ctx.beta * r;
        Int c = t.floor();
        r = t - ctx.F->from_rat(Rat(c));
        digits.push_back(c.get_si());
        if (r.is_zero()) {
            pd.d1 = digits;
            pd.d1_finite = true;
            // d* = (d_1 ... d_{m-1} (d_m - 1))^inf
            std::vector<long> per = digits;
            per.back() -= 1;
            // trim: the period stays as is (self-admissibility verified below)
            pd.dstar_period = per;
            break;
        }
        std::string key;
        for (const auto& x : r.coords()) { key += x.get_str(); key += '|'; }
        auto it = seen.find(key);
        if (it != seen.end()) {
            size_t pre_len = it->second;
            pd.d1_finite = false;
            pd.dstar_pre.assign(digits.begin(), digits.begin() + (long)pre_len);
            pd.dstar_period.assign(digits.begin() + (long)pre_len, digits.end());
            break;
        }
        seen[key] = digits.size();
    }
    if (pd.dstar_period.empty())
        fail(Errc::period_cap_exceeded,
             "quasi-greedy expansion of 1 not eventually periodic within cap");

    // d* must be its own admissibility witness: every shift <= d* lexicographically
    size_t n_check = pd.spine_length() * 2 + 8;
    for (size_t s = 1; s < n_check; ++s) {
        for (size_t i = 0; i < n_check; ++i) {
            long a = pd.dstar_at(s + i), b = pd.dstar_at(i);
            if (a < b) break;
            if (a > b) fail(Errc::internal, "d* fails self-admissibility");
        }
    }
    return pd;
}

/// Exact value of d* as an element of Q(beta): must equal 1.
inline NfElem dstar_value(const ParryData& pd, const BetaContext& ctx) {
    NfElem acc = ctx.F->zero();
    NfElem binv = ctx.beta_inv;
    size_t rho = pd.dstar_pre.size(), pi = pd.dstar_period.size();
    for (size_t i = 0; i < rho; ++i)
        acc = acc + Rat(pd.dstar_pre[i]) * binv.pow((long)i + 1);
    NfElem per = ctx.F->zero();
    for (size_t j = 0; j < pi; ++j)
        per = per + Rat(pd.dstar_period[j]) * binv.pow((long)j + 1);
    // sum_{k>=0} beta^{-k pi} * per * beta^{-rho}
    NfElem ratio = binv.pow((long)pi);
    NfElem geom = per / (ctx.F->one() - ratio);
    return acc + binv.pow((long)rho) * geom;
}

// ---------------------------------------------------------------------------
// admissibility (Parry's lexicographic criterion)

/// Every suffix of the word must be lexicographically <= d*; a suffix that
/// ties to the end of the word is admissible (extendable by zeros).
inline bool is_admissible(const std::vector<long>& word, const ParryData& pd) {
    for (long a : word)
        if (a < 0 || a > pd.digit_cap)
            fail(Errc::alphabet_violation, "digit outside the alphabet");
    for (size_t s = 0; s < word.size(); ++s) {
        for (size_t i = 0; s + i < word.size(); ++i) {
            long a = word[s + i], b = pd.dstar_at(i);
            if (a > b) return false;
            if (a < b) break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// finite beta expansions

/// Finite expansion sum_k digits[k - start] beta^(-k); start_exponent may be
///" <= 0 (integer part digits). No leading/trailing zeros stored.
struct BetaDigits {
    std::vector<long> digits;
    long start_exponent = 1;

    bool is_zero() const { return digits.empty(); }
    long end_exponent() const { return start_exponent + (long)digits.size() - 1; }
    long digit_at(long k) const {
        if (k < start_exponent || k > end_exponent()) return 0;
        return digits[(size_t)(k - start_exponent)];
    }
    void normalize() {
        size_t lead = 0;
        while (lead < digits.size() && digits[lead] == 0) ++lead;
        digits.erase(digits.begin(), digits.begin() + (long)lead);
        start_exponent += (long)lead;
        while (!digits.empty() && digits.back() == 0) digits.pop_back();
        if (digits.empty()) start_exponent = 1;
    }

    /// radix-point text: digits at exponents <= 0 then '.' then exponents >= 1;
    /// the zero expansion renders as the empty string
    std::string to_string() const {
        if (digits.empty()) return "";
        std::string left, right;
        if (start_exponent <= 0)
            for (long k = start_exponent; k <= 0; ++k) left += (char)('0' + digit_at(k));
        for (long k = 1; k <= end_exponent(); ++k) right += (char)('0' + digit_at(k));
        return left + "." + right;
    }

    static BetaDigits parse(const std::string& text) {
        BetaDigits bd;
        if (text.empty() || text == ".") return bd;
        auto dot = text.find('.');
        std::string left = dot == std::string::npos ? text : text.substr(0, dot);
        std::string right = dot == std::string::npos ? "" : text.substr(dot + 1);
        std::vector<long> ds;
        long start = 1 - (long)left.size();
        for (char ch : left + right) {
            if (ch < '0' || ch > '9') fail(Errc::parse_error, "bad digit string: " + text);
            ds.push_back(ch - '0');
        }
        bd.digits = std::move(ds);
        bd.start_exponent = start;
        bd.normalize();
        return bd;
    }
};

/// exact value in Q(beta)
inline NfElem eval_digits(const BetaDigits& bd, const BetaContext& ctx) {
    NfElem acc = ctx.F->zero();
    for (size_t i = 0; i < bd.digits.size(); ++i) {
        long k = bd.start_exponent + (long)i;
        if (bd.digits[i] == 0) continue;
        acc = acc + Rat(bd.digits[i]) * ctx.beta_inv.pow(k);
    }
    return acc;
}

struct GreedyResult {
    BetaDigits digits;
    NfElem remainder;  // x - value(digits), exact; < beta^-depth when capped
    bool exact;        // remainder == 0
};

/// Greedy expansion of x >= 0 to fractional depth D (exact termination when
/// the remainder vanishes). All digit decisions are exact in Q(beta).
inline GreedyResult greedy_expand(const NfElem& x, const BetaContext& ctx, long depth = 64) {
    GreedyResult out;
    out.remainder = ctx.F->zero();
    if (x.is_zero()) {
        out.exact = true;
        return out;
    }
    if (x.sign() < 0) fail(Errc::internal, "greedy_expand: negative input");

    // most significant position k0: largest m with beta^m <= x, k0 = -m
    long m = 0;
    if ((x - ctx.F->one()).sign() >= 0) {
        while ((x - ctx.beta.pow(m + 1)).sign() >= 0) ++m;
    } else {
        m = -1;
        while ((x - ctx.beta.pow(m)).sign() < 0) --m;
    }
    long k0 = -m;
    NfElem r = x;
    std::vector<long> ds;
    long k = k0;
    for (;; ++k) {
        if (k > depth && k > 0) break;
        NfElem scaled = r * ctx.beta.pow(k);
        Int c = scaled.floor();
        ds.push_back(c.get_si());
        if (c != 0) r = r - Rat(c) * ctx.beta_inv.pow(k);
        if (r.is_zero()) { ++k; break; }
    }
    out.digits.digits = std::move(ds);
    out.digits.start_exponent = k0;
    out.digits.normalize();
    out.remainder = r;
    out.exact = r.is_zero();
    return out;
}

// ---------------------------------------------------------------------------
// Fin(beta) addition

struct FinAddResult {
    BetaDigits sum;
    long left_span = 0;   // how far the sum extends past the inputs, high side
    long right_span = 0;  // low side
    long carry_span() const { return std::max(left_span, right_span); }
};

/// Evaluate-then-re-expand addition in Fin(beta); exact. NonTerminating when
/// the greedy expansion of the sum fails to terminate within depth_cap
/// (evidence against finitariness, reported with the witness digits).
inline FinAddResult fin_add(const BetaDigits& a, const BetaDigits& b, const BetaContext& ctx,
                            long depth_cap = 256) {
    NfElem va = eval_digits(a, ctx), vb = eval_digits(b, ctx);
    GreedyResult g = greedy_expand(va + vb, ctx, depth_cap);
    if (!g.exact)
        fail(Errc::non_terminating,
             "fin_add: expansion did not terminate within depth cap; prefix " +
                 g.digits.to_string());
    FinAddResult out;
    out.sum = g.digits;
    if (!out.sum.is_zero()) {
        long in_start = std::min(a.is_zero() ? out.sum.start_exponent : a.start_exponent,
                                 b.is_zero() ? out.sum.start_exponent : b.start_exponent);
        long in_end = std::max(a.is_zero() ? out.sum.end_exponent() : a.end_exponent(),
                               b.is_zero() ? out.sum.end_exponent() : b.end_exponent());
        out.left_span = std::max(0L, in_start - out.sum.start_exponent);
        out.right_span = std::max(0L, out.sum.end_exponent() - in_end);
    }
    return out;
}

/// Sufficient finitariness condition: x^n - a_{n-1} x^{n-1} - ... - a_0 with
/// a_{n-1} >= ... >= a_0 >= 1. False means inconclusive, not "not finitary".
inline bool finitary_sufficient(const AssociatedPoly& f_monic) {
    if (!f_monic.monic()) fail(Errc::internal, "finitary_sufficient expects the monic side");
    int d = f_monic.degree();
    if (d < 1) return false;
    Int prev = -1;  // requires -f[i] descending from i = d-1 down to 0, all >= 1
    for (int i = d - 1; i >= 0; --i) {
        Int ai = -f_monic[i];
        if (ai < 1) return false;
        if (prev >= 0 && ai > prev) return false;
        prev = ai;
    }
    return true;
}

struct FinitaryReport {
    bool pass = true;
    long samples = 0;
    long failures = 0;
    long max_left_span = 0;
    long max_right_span = 0;
    std::string first_witness;  // inputs of the first non-terminating pair
    long empirical_gap() const { return std::max(max_left_span, max_right_span); }
};

/// Random pairs from (Z[1/beta])+ with bounded-height coefficients, added via
/// fin_add; pass iff every expansion terminates. The measured max carry span
/// is the empirical gap length G (an output, not a claim).
inline FinitaryReport finitary_empirical(const BetaContext& ctx, long samples = 200,
                                         long depth = 64, std::uint64_t seed = 0,
                                         long height = 3, long span = 6) {
    FinitaryReport rep;
    rep.samples = samples;
    Rng rng(seed ^ 0x9e3779b9u);
    for (long s = 0; s < samples; ++s) {
        auto random_elem = [&]() {
            NfElem acc = ctx.F->zero();
            for (long i = 0; i <= span; ++i)
                acc = acc + Rat(rng.range(0, height)) * ctx.beta_inv.pow(i);
            return acc;
        };
        NfElem xa = random_elem(), xb = random_elem();
        GreedyResult ga = greedy_expand(xa, ctx, depth * 4);
        GreedyResult gb = greedy_expand(xb, ctx, depth * 4);
        if (!ga.exact || !gb.exact) {
            rep.pass = false;
            ++rep.failures;
            if (rep.first_witness.empty()) rep.first_witness = "operand expansion nonterminating";
            continue;
        }
        try {
            FinAddResult fr = fin_add(ga.digits, gb.digits, ctx, depth * 4);
            rep.max_left_span = std::max(rep.max_left_span, fr.left_span);
            rep.max_right_span = std::max(rep.max_right_span, fr.right_span);
        } catch (const Error& e) {
            if (e.code != Errc::non_terminating) throw;
            rep.pass = false;
            ++rep.failures;
            if (rep.first_witness.empty())
                rep.first_witness = ga.digits.to_string() + " + " + gb.digits.to_string();
        }
    }
    return rep;
}

}  // namespace betadyn

#endif  // BETADYN_BETA_HPP
