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

#ifndef BETADYN_CLI_HPP
#define BETADYN_CLI_HPP

#include <CLI11.hpp>
#include <string>
#include <utility>
#include <vector>

#include "report.hpp"

namespace betadyn {

// ---------------------------------------------------------------------------
// Q(beta) literals: rationals, b (= beta), sqrt(c) in quadratic fields,
// coefficient lists [c0, c1, ...], and +-*/^ combinations

namespace detail {

struct ElemParser {
    const std::string& s;
    size_t i = 0;
    const BetaContext& ctx;

    ElemParser(const std::string& text, const BetaContext& c) : s(text), ctx(c) {}

    void ws() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void bad(const std::string& why) {
        fail(Errc::parse_error, "bad field element '" + s + "': " + why);
    }

    Int integer() {
        ws();
        size_t j = i;
        while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
        if (j == i) bad("expected digits");
        Int v(s.substr(i, j - i));
        i = j;
        return v;
    }

    NfElem sqrt_lit() {
        if (!eat('(')) bad("expected ( after sqrt");
        bool neg = eat('-');
        Int c = integer();
        if (!eat(')')) bad("expected ) after sqrt");
        if (neg) bad("sqrt of a negative integer is not in a real field");
        Rat cc(c);
        // rational square?
        if (mpz_perfect_square_p(cc.get_num().get_mpz_t())) {
            Int r;
            mpz_sqrt(r.get_mpz_t(), cc.get_num().get_mpz_t());
            return ctx.F->from_rat(Rat(r));
        }
        if (ctx.F->degree() != 2) bad("sqrt literal needs a quadratic field");
        // theta^2 = t theta + n; (u + v theta)^2 = c with u = -v t / 2
        Rat t(-ctx.F->poly()[1]), n(-ctx.F->poly()[0]);
        Rat denom = t * t / 4 + n;
        if (denom == 0) bad("degenerate quadratic field");
        Rat v2 = cc / denom;
        // v2 must be a rational square
        if (!mpz_perfect_square_p(v2.get_num().get_mpz_t()) ||
            !mpz_perfect_square_p(v2.get_den().get_mpz_t()))
            bad("sqrt(" + c.get_str() + ") is not in this field");
        Int vn, vd;
        mpz_sqrt(vn.get_mpz_t(), v2.get_num().get_mpz_t());
        mpz_sqrt(vd.get_mpz_t(), v2.get_den().get_mpz_t());
        Rat v(vn, vd);
        Rat u = -v * t / 2;
        NfElem cand = ctx.F->from_coords({u, v});
        if (cand.sign() < 0) cand = -cand;
        if (cand * cand != ctx.F->from_rat(cc)) bad("sqrt verification failed");
        return cand;
    }

    NfElem coeff_list() {
        // [c0, c1, ...] = sum c_i beta^i, entries rational p or p/q
        std::vector<Rat> cs;
        for (;;) {
            ws();
            if (eat(']')) break;
            bool neg = eat('-');
            Int p = integer();
            Rat c(p);
            if (eat('/')) {
                Int q = integer();
                c = Rat(p, q);
                c.canonicalize();
            }
            if (neg) c = -c;
            cs.push_back(c);
            ws();
            if (i < s.size() && s[i] == ',') ++i;
        }
        NfElem acc = ctx.F->zero();
        for (size_t k = 0; k < cs.size(); ++k)
            acc = acc + cs[k] * ctx.beta.pow((long)k);
        return acc;
    }

    NfElem base() {
        ws();
        if (i >= s.size()) bad("unexpected end");
        char ch = s[i];
        if (ch == '(') {
            ++i;
            NfElem e = expr();
            if (!eat(')')) bad("expected )");
            return e;
        }
        if (ch == '[') {
            ++i;
            return coeff_list();
        }
        if (std::isdigit((unsigned char)ch)) return ctx.F->from_rat(Rat(integer()));
        if (s.compare(i, 4, "sqrt") == 0) {
            i += 4;
            return sqrt_lit();
        }
        if (s.compare(i, 4, "beta") == 0) {
            i += 4;
            return ctx.beta;
        }
        if (ch == 'b') {
            ++i;
            return ctx.beta;
        }
        bad(std::string("unexpected character '") + ch + "'");
    }

    NfElem factor() {
        NfElem e = base();
        ws();
        if (i < s.size() && s[i] == '^') {
            ++i;
            ws();
            bool neg = eat('-');
            Int ex = integer();
            long exp = ex.get_si();
            e = e.pow(neg ? -exp : exp);
        }
        return e;
    }

    NfElem term() {
        NfElem e = factor();
        for (;;) {
            ws();
            if (i < s.size() && s[i] == '*') {
                ++i;
                e = e * factor();
            } else if (i < s.size() && s[i] == '/') {
                ++i;
                NfElem d = factor();
                if (d.is_zero()) bad("division by zero");
                e = e / d;
            } else {
                break;
            }
        }
        return e;
    }

    NfElem expr() {
        ws();
        bool neg = eat('-');
        NfElem e = term();
        if (neg) e = -e;
        for (;;) {
            ws();
            if (i < s.size() && s[i] == '+') {
                ++i;
                e = e + term();
            } else if (i < s.size() && s[i] == '-') {
                ++i;
                e = e - term();
            } else {
                break;
            }
        }
        return e;
    }
};

}  // namespace detail

inline NfElem parse_field_element(const std::string& text, const BetaContext& ctx) {
    detail::ElemParser p(text, ctx);
    NfElem e = p.expr();
    p.ws();
    if (p.i != text.size()) p.bad("trailing characters");
    return e;
}

inline ordered_json expand_report(const std::string& x_text, const std::string& poly_text,
                                  const ToolSettings& st) {
    AssociatedPoly f = parse_associated(poly_text);
    ordered_json j = report_header("expand", poly_text, f, st);
    try {
        BetaContext ctx = make_beta_context(f, st.precision_bits);
        NfElem x = parse_field_element(x_text, ctx);
        if (!x.is_zero() && x.sign() < 0)
            fail(Errc::usage_error, "expansion input must be nonnegative");
        GreedyResult g = greedy_expand(x, ctx, st.depth);
        ordered_json e;
        e["x"] = x_text;
        e["x_exact"] = x.to_string();
        e["x_value"] = detail::dec(x.real_value(192));
        e["beta"] = detail::dec(ctx.beta_real(192));
        e["digits"] = g.digits.to_string();
        e["start_exponent"] = g.digits.start_exponent;
        e["depth"] = st.depth;
        e["exact"] = g.exact;
        e["remainder_exact"] = g.remainder.to_string();
        e["remainder_value"] = detail::dec(g.remainder.real_value(192));
        j["expand"] = e;
    } catch (const Error& e) {
        j["refusal"] = std::string(errc_name(e.code)) + ": " + e.what();
        throw ReportedError(j, e);
    }
    return j;
}

// ---------------------------------------------------------------------------
// driver

inline int exit_code_for(Errc c) {
    switch (c) {
        case Errc::parse_error:
        case Errc::usage_error:
            return 1;
        case Errc::precision_exhausted:
            return 3;
        case Errc::internal:
            return 3;
        default:
            return 2;  // mathematical refusal
    }
}

/// Runs the CLI on argv-style arguments; returns (exit code, stdout text).
inline std::pair<int, std::string> run_cli(std::vector<std::string> args) {
    CLI::App app{"betadyn: classification, beta-expansion arithmetic and symbolic coding "
                 "of cyclic algebraic dynamical systems"};
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "config file (key=value, flags override)");

    ToolSettings st;
    bool as_json = false, as_text = false;
    app.add_option("--precision", st.precision_bits, "working precision in bits")
        ->capture_default_str();
    app.add_option("--padic-digits", st.padic_digits, "p-adic precision in digits")
        ->capture_default_str();
    app.add_option("--depth", st.depth, "expansion depth")->capture_default_str();
    app.add_option("--max-period", st.max_period, "kernel period bound")->capture_default_str();
    app.add_option("--seed", st.seed, "sampling seed")->capture_default_str();
    app.add_option("--threads", st.threads, "sampling threads (merge is deterministic)")
        ->capture_default_str();
    app.add_flag("--json", as_json, "JSON output (default)");
    app.add_flag("--text", as_text, "key = value text output");

    std::string poly_text, x_text;

    auto* analyze = app.add_subcommand("analyze", "classify the dynamical system of f");
    analyze->fallthrough();
    analyze->add_option("poly", poly_text, "polynomial, e.g. \"x^2+2x-1\" or \"[-1,2,1]\"")
        ->required();

    auto* expand = app.add_subcommand("expand", "greedy beta-expansion of x");
    expand->fallthrough();
    expand->add_option("x", x_text, "element of Q(beta): \"1/2\", \"4/b\", \"1+1*sqrt(2)\"")
        ->required();
    expand->add_option("poly", poly_text, "polynomial fixing beta")->required();

    auto* kernel = app.add_subcommand("kernel", "periodic sequences coding to zero");
    kernel->fallthrough();
    kernel->add_option("poly", poly_text, "polynomial")->required();

    auto* sample = app.add_subcommand("sample", "almost-1-1 collision sampling");
    sample->fallthrough();
    sample->add_option("poly", poly_text, "polynomial")->required();
    sample->add_option("--samples", st.samples, "number of sampled windows")
        ->capture_default_str();
    sample->add_option("--window", st.window, "window half-width W for [-W, W]")
        ->capture_default_str();
    sample->add_option("--epsilon", st.epsilon, "collision grid size")->capture_default_str();
    sample->add_flag("--inject-witness", st.inject_witness,
                     "inject the expansion-of-1 kernel pair");

    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("betadyn");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        std::string out;
        if (e.get_exit_code() == 0) {
            out = app.help();
            return {0, out};
        }
        return {1, std::string("usage error: ") + e.what() + "\n"};
    }

    if (st.window < 0) return {1, "usage error: window must be nonnegative\n"};
    if (st.samples <= 0) return {1, "usage error: samples must be positive\n"};
    if (st.epsilon <= 0) return {1, "usage error: epsilon must be positive\n"};
    if (st.max_period < 1 || st.max_period > 12)
        return {1, "usage error: max-period must be in [1, 12]\n"};

    auto emit = [&](const ordered_json& j) {
        return as_text ? to_text(j) : j.dump(2) + "\n";
    };

    try {
        ordered_json rep;
        if (*analyze) rep = analyze_report(poly_text, st);
        else if (*expand) rep = expand_report(x_text, poly_text, st);
        else if (*kernel) rep = kernel_report(poly_text, st);
        else if (*sample) rep = sample_report(poly_text, st);
        return {0, emit(rep)};
    } catch (const ReportedError& re) {
        return {exit_code_for(re.err.code), emit(re.report)};
    } catch (const Error& e) {
        ordered_json j;
        j["tool"] = "betadyn";
        j["version"] = kToolVersion;
        j["error"] = std::string(errc_name(e.code)) + ": " + e.what();
        return {exit_code_for(e.code), emit(j)};
    }
}

}  // namespace betadyn

#endif  // BETADYN_CLI_HPP
