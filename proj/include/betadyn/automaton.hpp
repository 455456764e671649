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

#ifndef BETADYN_AUTOMATON_HPP
#define BETADYN_AUTOMATON_HPP

#include <vector>

#include "beta.hpp"
#include "common.hpp"
#include "laurent.hpp"
#include "polyring.hpp"

namespace betadyn {

/// Deterministic automaton recognizing the admissible words of the beta-shift.
/// All states accept; a missing transition (-1) rejects. State 0 is initial
/// (it also absorbs leading zeros, so windows embedded in zero tails start
/// there).
struct ParryAutomaton {
    int initial = 0;
    long alphabet = 2;                   // digits 0..alphabet-1
    std::vector<std::vector<int>> next;  // next[state][digit] or -1

    int states() const { return (int)next.size(); }

    bool accepts(const std::vector<long>& word) const {
        int s = initial;
        for (long a : word) {
            if (a < 0 || a >= alphabet) return false;
            s = next[(size_t)s][(size_t)a];
            if (s < 0) return false;
        }
        return true;
    }

    /// integer adjacency matrix: count of transitions between states
    std::vector<std::vector<Int>> adjacency() const {
        std::vector<std::vector<Int>> m((size_t)states(),
                                        std::vector<Int>((size_t)states(), Int(0)));
        for (int s = 0; s < states(); ++s)
            for (long a = 0; a < alphabet; ++a) {
                int t = next[(size_t)s][(size_t)a];
                if (t >= 0) m[(size_t)s][(size_t)t] += 1;
            }
        return m;
    }

    /// number of accepted words of each length 0..len from `state`
    std::vector<Int> path_counts(int len, int state) const {
        // counts[l][s]: words of length l from s
        std::vector<std::vector<Int>> cnt((size_t)len + 1,
                                          std::vector<Int>((size_t)states(), Int(0)));
        for (int s = 0; s < states(); ++s) cnt[0][(size_t)s] = 1;
        for (int l = 1; l <= len; ++l)
            for (int s = 0; s < states(); ++s) {
                Int acc = 0;
                for (long a = 0; a < alphabet; ++a) {
                    int t = next[(size_t)s][(size_t)a];
                    if (t >= 0) acc += cnt[(size_t)(l - 1)][(size_t)t];
                }
                cnt[(size_t)l][(size_t)s] = acc;
            }
        std::vector<Int> out((size_t)len + 1);
        for (int l = 0; l <= len; ++l) out[(size_t)l] = cnt[(size_t)l][(size_t)state];
        return out;
    }
};

/// Spine construction from d*: state l = "currently matching d* at position
/// l". Self-admissibility of d* makes the longest tie the binding one, a
/// strictly smaller digit resets to state 0, a larger digit rejects. The
/// spine wraps at preperiod + period. Moore-minimized afterwards.
inline ParryAutomaton build_automaton(const ParryData& pd) {
    size_t rho = pd.dstar_pre.size(), pi = pd.dstar_period.size();
    size_t n = rho + pi;
    long alphabet = pd.digit_cap + 1;

    std::vector<std::vector<int>> next(n, std::vector<int>((size_t)alphabet, -1));
    for (size_t l = 0; l < n; ++l) {
        long expect = pd.dstar_at(l);
        for (long a = 0; a < alphabet; ++a) {
            if (a > expect) continue;  // reject
            if (a == expect) {
                size_t t = l + 1;
                if (t == n) t = rho;  // wrap into the period
                next[l][(size_t)a] = (int)t;
            } else {
                next[l][(size_t)a] = 0;
            }
        }
    }

    // Moore minimization (all states accepting; -1 is the implicit sink)
    std::vector<int> cls(n, 0);
    for (;;) {
        // signature: class of each transition target
        std::vector<std::vector<int>> sig(n);
        for (size_t s = 0; s < n; ++s) {
            sig[s].push_back(cls[s]);
            for (long a = 0; a < alphabet; ++a) {
                int t = next[s][(size_t)a];
                sig[s].push_back(t < 0 ? -1 : cls[(size_t)t]);
            }
        }
        std::vector<int> ncls(n, -1);
        int k = 0;
        for (size_t s = 0; s < n; ++s) {
            if (ncls[s] >= 0) continue;
            for (size_t t = s; t < n; ++t)
                if (ncls[t] < 0 && sig[t] == sig[s]) ncls[t] = k;
            ++k;
        }
        bool changed = false;
        for (size_t s = 0; s < n; ++s)
            if (ncls[s] != cls[s]) changed = true;
        cls = std::move(ncls);
        if (!changed) break;
    }
    int nclasses = 0;
    for (size_t s = 0; s < n; ++s) nclasses = std::max(nclasses, cls[s] + 1);

    ParryAutomaton out;
    out.alphabet = alphabet;
    out.initial = cls[0];
    out.next.assign((size_t)nclasses, std::vector<int>((size_t)alphabet, -1));
    for (size_t s = 0; s < n; ++s)
        for (long a = 0; a < alphabet; ++a) {
            int t = next[s][(size_t)a];
            out.next[(size_t)cls[s]][(size_t)a] = t < 0 ? -1 : cls[(size_t)t];
        }
    return out;
}

/// log of the spectral radius of the adjacency matrix, via the exact integer
/// characteristic polynomial (Faddeev-LeVerrier) and certified root moduli.
inline Real automaton_entropy(const ParryAutomaton& aut, long precision_bits = 160) {
    int n = aut.states();
    auto A = aut.adjacency();
    // char poly coefficients over Q: c(x) = det(xI - A)
    // Faddeev-LeVerrier: M_0 = I, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I ...
    std::vector<Rat> c((size_t)n + 1, Rat(0));
    c[(size_t)n] = 1;
    std::vector<std::vector<Rat>> M((size_t)n, std::vector<Rat>((size_t)n, Rat(0)));
    for (int i = 0; i < n; ++i) M[(size_t)i][(size_t)i] = 1;
    for (int k = 1; k <= n; ++k) {
        // M = A * M
        std::vector<std::vector<Rat>> AM((size_t)n, std::vector<Rat>((size_t)n, Rat(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rat acc = 0;
                for (int t = 0; t < n; ++t) acc += Rat(A[(size_t)i][(size_t)t]) * M[(size_t)t][(size_t)j];
                AM[(size_t)i][(size_t)j] = acc;
            }
        Rat tr = 0;
        for (int i = 0; i < n; ++i) tr += AM[(size_t)i][(size_t)i];
        Rat ck = -tr / k;
        c[(size_t)(n - k)] = ck;
        for (int i = 0; i < n; ++i) AM[(size_t)i][(size_t)i] += ck;
        M = std::move(AM);
    }
    // strip x^k factors, normalize, take the largest root modulus
    QPoly cp(std::move(c));
    size_t shift = 0;
    while (shift < cp.c.size() && cp.c[shift] == 0) ++shift;
    std::vector<Rat> cc(cp.c.begin() + (long)shift, cp.c.end());
    AssociatedPoly ap(qpoly_primitive(QPoly(std::move(cc))));
    RootSet rs = isolate_roots(ap, precision_bits);
    Rat best = 0;
    for (const auto& b : rs.roots) {
        auto [lo, hi] = b.modulus_sq_bounds();
        if (hi > best) best = hi;
    }
    long bits = precision_bits + 32;
    return mpf_log(Real(best, (mp_bitcnt_t)bits), bits) / 2;
}

}  // namespace betadyn

#endif  // BETADYN_AUTOMATON_HPP
