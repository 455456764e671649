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

#ifndef BETADYN_COMMON_HPP
#define BETADYN_COMMON_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace betadyn {

using Int = mpz_class;
using Rat = mpq_class;
using Real = mpf_class;

// Error taxonomy. The CLI maps parse -> exit 1, refusal -> exit 2,
// precision -> exit 3.
enum class Errc {
    parse_error,
    zero_polynomial,
    not_hyperbolic,
    not_irreducible,
    not_pisot,
    degree_too_large,
    period_cap_exceeded,
    precision_exhausted,
    divergent_direction,
    hensel_failure,
    alphabet_violation,
    non_terminating,
    search_cap_exceeded,
    gap_condition_unmet,
    usage_error,
    internal,
};

struct Error : std::runtime_error {
    Errc code;
    Error(Errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::parse_error: return "ParseError";
        case Errc::zero_polynomial: return "ZeroPolynomial";
        case Errc::not_hyperbolic: return "NotHyperbolic";
        case Errc::not_irreducible: return "NotIrreducible";
        case Errc::not_pisot: return "NotPisot";
        case Errc::degree_too_large: return "DegreeTooLarge";
        case Errc::period_cap_exceeded: return "PeriodCapExceeded";
        case Errc::precision_exhausted: return "PrecisionExhausted";
        case Errc::divergent_direction: return "DivergentDirection";
        case Errc::hensel_failure: return "HenselFailure";
        case Errc::alphabet_violation: return "AlphabetViolation";
        case Errc::non_terminating: return "NonTerminating";
        case Errc::search_cap_exceeded: return "SearchCapExceeded";
        case Errc::gap_condition_unmet: return "GapConditionUnmet";
        case Errc::usage_error: return "UsageError";
        case Errc::internal: return "InternalError";
    }
    return "Error";
}

// Deterministic stream of pseudo-random 64-bit words (splitmix64).
// std::uniform_int_distribution is not portable bit-for-bit, so sampling
// goes through this everywhere a seed appears in a report.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift; bias is < 2^-64 * n, irrelevant here and fully
        // deterministic across platforms
        unsigned __int128 m = (unsigned __int128)next() * (unsigned __int128)n;
        return (std::uint64_t)(m >> 64);
    }

    long range(long lo, long hi) {  // inclusive
        return lo + (long)below((std::uint64_t)(hi - lo + 1));
    }
};

// Fixed-point decimal rendering of an mpf value, deterministic for a given
// (value, digits). Used for byte-stable reports.
inline std::string to_decimal(const Real& x, int frac_digits) {
    mpf_class ax(x);
    bool neg = sgn(ax) < 0;
    if (neg) ax = -ax;
    // scale, round to nearest integer, then re-insert the point
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, (unsigned long)frac_digits);
    mpf_class scaled = ax * mpf_class(scale);
    scaled += 0.5;
    mpz_class digits;
    mpz_set_f(digits.get_mpz_t(), scaled.get_mpf_t());  // truncates
    std::string s = digits.get_str();
    if ((int)s.size() <= frac_digits) s.insert(0, std::string(frac_digits + 1 - s.size(), '0'));
    s.insert(s.size() - frac_digits, ".");
    if (neg && digits != 0) s.insert(0, "-");
    return s;
}

inline Real real_with_prec(long bits) { return Real(0, (mp_bitcnt_t)bits); }

/// Natural log of a positive mpf value, via atanh series after binary range
/// reduction. Accurate to roughly the working precision of x (plus margin).
inline Real mpf_log(const Real& x0, long bits) {
    if (sgn(x0) <= 0) fail(Errc::internal, "mpf_log: nonpositive argument");
    long work = bits + 32;
    Real x(x0, (mp_bitcnt_t)work);
    // x = m * 2^e with m in [1, 2)
    long e = 0;
    Real two(2, (mp_bitcnt_t)work), one(1, (mp_bitcnt_t)work);
    while (x >= two) { x /= 2; ++e; }
    while (x < one) { x *= 2; --e; }

    auto atanh_series = [&](const Real& t) {
        // 2 * (t + t^3/3 + t^5/5 + ...)
        Real t2 = t * t, term = t, sum(0, (mp_bitcnt_t)work);
        Real thr(1, (mp_bitcnt_t)work);
        mpf_div_2exp(thr.get_mpf_t(), thr.get_mpf_t(), (mp_bitcnt_t)(bits + 16));
        for (long k = 0; k < 4 * work; ++k) {
            Real add = term / (2 * k + 1);
            sum += add;
            if (abs(add) < thr) break;
            term *= t2;
        }
        return Real(2 * sum);
    };

    Real lnm = atanh_series(Real((x - 1) / (x + 1)));
    Real ln2 = atanh_series(Real(one / 3));
    return Real(lnm + e * ln2);
}

// |x| for mpq
inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Int int_pow(Int b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rat rat_pow(const Rat& b, long e) {
    Rat r;
    if (e >= 0) {
        mpz_pow_ui(r.get_num_mpz_t(), b.get_num().get_mpz_t(), (unsigned long)e);
        mpz_pow_ui(r.get_den_mpz_t(), b.get_den().get_mpz_t(), (unsigned long)e);
    } else {
        if (b == 0) fail(Errc::internal, "rat_pow: zero to negative power");
        mpz_pow_ui(r.get_num_mpz_t(), b.get_den().get_mpz_t(), (unsigned long)(-e));
        mpz_pow_ui(r.get_den_mpz_t(), b.get_num().get_mpz_t(), (unsigned long)(-e));
    }
    r.canonicalize();
    return r;
}

// floor of a rational as mpz
inline Int rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

}  // namespace betadyn

#endif  // BETADYN_COMMON_HPP
