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

#ifndef BETADYN_SHIFT_HPP
#define BETADYN_SHIFT_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "beta.hpp"
#include "common.hpp"

namespace betadyn {

/// Two-sided sequence supported on a window, implicit zeros outside. Index n
/// carries the digit multiplying beta^-n in evaluations (n >= 1 is the
/// fractional side).
struct BiSequence {
    long n_min = 0, n_max = -1;          // empty window when n_min > n_max
    std::vector<long> digits;            // index n - n_min

    static BiSequence zeros(long lo, long hi) {
        BiSequence s;
        s.n_min = lo;
        s.n_max = hi;
        s.digits.assign((size_t)(hi - lo + 1), 0);
        return s;
    }
    long at(long n) const {
        if (n < n_min || n > n_max) return 0;
        return digits[(size_t)(n - n_min)];
    }
    void set(long n, long v) {
        if (n < n_min || n > n_max) fail(Errc::internal, "BiSequence::set outside window");
        digits[(size_t)(n - n_min)] = v;
    }
    BiSequence shifted(long k) const {  // (shift s)_n = s_{n+k}
        BiSequence s = *this;
        s.n_min -= k;
        s.n_max -= k;
        return s;
    }
    IntLaurentPoly to_laurent() const {
        std::map<long, Int> m;
        for (long n = n_min; n <= n_max; ++n)
            if (at(n) != 0) m[n] = at(n);
        return IntLaurentPoly::from_map(m);
    }

    /// "…0|dd.dd|0…": explicit window markers, radix point between n=0 and n=1
    std::string to_string() const {
        std::string out = "…0|";
        for (long n = n_min; n <= n_max; ++n) {
            if (n == 1) out += ".";
            out += std::to_string(at(n));
        }
        if (n_max < 1) out += ".";
        out += "|0…";
        return out;
    }
};

/// Parry admissibility of the windowed sequence inside its zero tails.
/// Suffixes beginning before the window start with 0 < d*_1 and never bind.
inline bool window_admissible(const BiSequence& s, const ParryData& pd) {
    std::vector<long> w(s.digits);
    return is_admissible(w, pd);
}

/// Periodic bi-infinite sequence: s_n = word[(n + phase) mod L].
struct PeriodicSequence {
    std::vector<long> word;  // canonical (least) rotation
    long phase = 0;

    long at(long n) const {
        long L = (long)word.size();
        long i = ((n + phase) % L + L) % L;
        return word[(size_t)i];
    }
    BiSequence window(long lo, long hi) const {
        BiSequence s = BiSequence::zeros(lo, hi);
        for (long n = lo; n <= hi; ++n) s.set(n, at(n));
        return s;
    }
    std::string to_string() const {
        std::string w;
        for (long d : word) w += std::to_string(d);
        return "(" + w + ")^inf@" + std::to_string(phase);
    }
    friend bool operator==(const PeriodicSequence& a, const PeriodicSequence& b) {
        return a.word == b.word && a.phase == b.phase;
    }
};

namespace detail {

/// r^inf <= d* lexicographically, decided within one full state cycle
inline bool periodization_rotation_ok(const std::vector<long>& r, const ParryData& pd) {
    size_t L = r.size(), pi = pd.dstar_period.size(), rho = pd.dstar_pre.size();
    size_t bound = rho + std::lcm(L, pi) + L + pi + 4;
    for (size_t i = 0; i < bound; ++i) {
        long a = r[i % L], b = pd.dstar_at(i);
        if (a > b) return false;
        if (a < b) return true;
    }
    return true;  // equal over a full cycle: equal forever (tie = admissible)
}

inline long minimal_period(const std::vector<long>& w) {
    for (long p = 1; p <= (long)w.size(); ++p) {
        if ((long)w.size() % p != 0) continue;
        bool ok = true;
        for (size_t i = p; i < w.size() && ok; ++i)
            if (w[i] != w[i - (size_t)p]) ok = false;
        if (ok) return p;
    }
    return (long)w.size();
}

}  // namespace detail

/// All admissible periodic bi-infinite sequences of minimal period <=
/// max_period, phases enumerated explicitly. Deterministic order.
inline std::vector<PeriodicSequence> enumerate_periodic(const ParryData& pd, long max_period) {
    if (max_period > 12) fail(Errc::internal, "enumerate_periodic: max_period > 12");
    std::vector<PeriodicSequence> out;
    for (long L = 1; L <= max_period; ++L) {
        // DFS over words of length L, pruning inadmissible prefixes
        std::vector<long> w;
        std::vector<std::vector<long>> found;
        std::function<void()> rec = [&]() {
            if ((long)w.size() == L) {
                if (detail::minimal_period(w) != L) return;
                for (size_t k = 0; k < w.size(); ++k) {
                    std::vector<long> rot(w.begin() + (long)k, w.end());
                    rot.insert(rot.end(), w.begin(), w.begin() + (long)k);
                    if (!detail::periodization_rotation_ok(rot, pd)) return;
                }
                found.push_back(w);
                return;
            }
            for (long a = 0; a <= pd.digit_cap; ++a) {
                w.push_back(a);
                if (is_admissible(w, pd)) rec();
                w.pop_back();
            }
        };
        rec();
        // canonicalize by least rotation; each necklace contributes L phases
        std::vector<std::vector<long>> necklaces;
        for (const auto& cand : found) {
            std::vector<long> best = cand;
            for (size_t k = 1; k < cand.size(); ++k) {
                std::vector<long> rot(cand.begin() + (long)k, cand.end());
                rot.insert(rot.end(), cand.begin(), cand.begin() + (long)k);
                if (rot < best) best = rot;
            }
            if (std::find(necklaces.begin(), necklaces.end(), best) == necklaces.end())
                necklaces.push_back(best);
        }
        std::sort(necklaces.begin(), necklaces.end());
        for (const auto& neck : necklaces)
            for (long p = 0; p < L; ++p) out.push_back({neck, p});
    }
    return out;
}

// ---------------------------------------------------------------------------
// the odometer (adic transformation) on left-sided finite sequences

/// Left-sided sequences are BetaDigits with all exponents <= 0; evaluation
/// sum s_k beta^-k is then a nonnegative combination of beta^m, m >= 0.
inline bool left_sided(const BetaDigits& s) { return s.is_zero() || s.end_exponent() <= 0; }

/// Every admissible left-sided finite-support word, as BetaDigits, with
/// evaluation <= bound; deterministic order by (length, digits).
inline std::vector<BetaDigits> enumerate_left_sided(const BetaContext& ctx, const ParryData& pd,
                                                    const NfElem& bound, long max_len) {
    std::vector<BetaDigits> out;
    out.push_back(BetaDigits{});  // zero
    std::vector<long> w;
    std::function<void()> rec = [&]() {
        if (!w.empty() && w.front() != 0) {
            BetaDigits bd;
            bd.digits = w;
            bd.start_exponent = -(long)w.size() + 1;
            bd.normalize();
            if ((eval_digits(bd, ctx) - bound).sign() <= 0) out.push_back(bd);
        }
        if ((long)w.size() == max_len) return;
        for (long a = 0; a <= pd.digit_cap; ++a) {
            w.push_back(a);
            if (is_admissible(w, pd)) rec();
            w.pop_back();
        }
    };
    rec();
    return out;
}

/// Immediate successor in evaluation order among admissible left-sided
/// finite-support sequences. Bounded search; the greedy-truncation argument
/// puts the successor within value + 2, hence within a computable length.
inline BetaDigits odometer_successor(const BetaDigits& s, const BetaContext& ctx,
                                     const ParryData& pd, long search_cap = 8) {
    if (!left_sided(s)) fail(Errc::internal, "odometer_successor: sequence not left-sided");
    NfElem v = eval_digits(s, ctx);
    long cur_len = s.is_zero() ? 0 : (long)(0 - s.start_exponent + 1);

    // length bound: beta^(L-1) <= v + 2
    long lmax = 1;
    NfElem vp2 = v + ctx.F->from_rat(Rat(2));
    while ((ctx.beta.pow(lmax) - vp2).sign() <= 0) ++lmax;
    lmax += 1;
    if (lmax > cur_len + search_cap)
        fail(Errc::search_cap_exceeded, "odometer_successor: length bound exceeds search cap");

    bool have = false;
    BetaDigits best;
    NfElem bestv = ctx.F->zero();
    std::vector<long> w;
    std::function<void()> rec = [&]() {
        if (!w.empty() && w.front() != 0) {
            BetaDigits bd;
            bd.digits = w;
            bd.start_exponent = -(long)w.size() + 1;
            bd.normalize();
            NfElem val = eval_digits(bd, ctx);
            if ((val - v).sign() > 0 && (!have || (val - bestv).sign() < 0)) {
                have = true;
                best = bd;
                bestv = val;
            }
        }
        if ((long)w.size() == lmax) return;
        for (long a = 0; a <= pd.digit_cap; ++a) {
            w.push_back(a);
            if (is_admissible(w, pd)) rec();
            w.pop_back();
        }
    };
    rec();
    if (!have) fail(Errc::search_cap_exceeded, "odometer_successor: no candidate found");
    return best;
}

// ---------------------------------------------------------------------------
// entropy

struct ShiftEntropy {
    Real log_beta;
    std::optional<Real> automaton_log;  // log of adjacency spectral radius
};

/// Topological entropy log(beta) of the beta-shift, cross-computed as the log
/// spectral radius of the Parry automaton when d* is eventually periodic.
inline ShiftEntropy shift_entropy(const BetaContext& ctx, const ParryData* pd,
                                  long precision_bits = 160) {
    ShiftEntropy out;
    out.log_beta = mpf_log(ctx.beta.real_value(precision_bits + 16), precision_bits);
    if (pd != nullptr) {
        ParryAutomaton aut = build_automaton(*pd);
        out.automaton_log = automaton_entropy(aut, precision_bits);
    }
    return out;
}

}  // namespace betadyn

#endif  // BETADYN_SHIFT_HPP
