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

#ifndef BETADYN_REPORT_HPP
#define BETADYN_REPORT_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "beta.hpp"
#include "coding.hpp"
#include "common.hpp"
#include "laurent.hpp"
#include "places.hpp"
#include "polyring.hpp"
#include "shift.hpp"

namespace betadyn {

using ordered_json = nlohmann::ordered_json;

inline const char* kToolVersion = "0.1.0";
inline const int kReportDigits = 15;  // displayed decimal digits, byte-stable

struct ToolSettings {
    long precision_bits = 128;
    int padic_digits = 64;
    long depth = 64;
    long max_period = 6;
    std::uint64_t seed = 0;
    int threads = 1;
    long samples = 500;
    long window = 12;
    double epsilon = 1e-6;
    bool inject_witness = false;

    ordered_json to_json() const {
        ordered_json j;
        j["precision_bits"] = precision_bits;
        j["padic_digits"] = padic_digits;
        j["depth"] = depth;
        j["max_period"] = max_period;
        j["seed"] = seed;
        j["threads"] = threads;
        j["display_digits"] = kReportDigits;
        return j;
    }
};

namespace detail {

inline std::string dec(const Real& x) { return to_decimal(x, kReportDigits); }

inline ordered_json json_int_vector(const std::vector<long>& v) {
    ordered_json a = ordered_json::array();
    for (long x : v) a.push_back(x);
    return a;
}

inline std::string word_string(const std::vector<long>& w) {
    std::string s;
    for (long d : w) s += std::to_string(d);
    return s;
}

}  // namespace detail

inline ordered_json report_header(const std::string& command, const std::string& raw,
                                  const AssociatedPoly& f, const ToolSettings& st) {
    ordered_json j;
    j["tool"] = "betadyn";
    j["version"] = kToolVersion;
    j["command"] = command;
    ordered_json in;
    in["raw"] = raw;
    in["normalized"] = f.to_string();
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : f.coeffs()) coeffs.push_back(c.get_str());
    in["coeffs_ascending"] = coeffs;
    in["degree"] = f.degree();
    j["input"] = in;
    j["settings"] = st.to_json();
    return j;
}

/// classification + beta block shared by analyze/kernel/sample; throws on
/// refusal (non-hyperbolic, reducible) after stuffing what it can into j.
inline void fill_classification(ordered_json& j, const AssociatedPoly& f,
                                const ToolSettings& st) {
    // reserve section order: classification, places, beta, notes
    j["classification"] = ordered_json::object();
    ordered_json cls;
    HyperbolicResult hyp = is_hyperbolic(f);
    cls["hyperbolic"] = hyp.value;
    cls["circle_roots"] = hyp.circle_root_count;
    if (hyp.value)
        cls["modulus_gap_lower_bound"] =
            detail::dec(Real(hyp.min_gap_lower, (mp_bitcnt_t)128));
    if (!hyp.value) {
        j["classification"] = cls;
        fail(Errc::not_hyperbolic, "polynomial is not hyperbolic: not an expansive system");
    }
    bool irred = is_irreducible(f);
    cls["irreducible"] = irred;
    if (!irred) {
        j["classification"] = cls;
        fail(Errc::not_irreducible, "polynomial is reducible: outside the irreducible scope");
    }

    PlaceClassification pc = classify_places(f, st.precision_bits, st.padic_digits);
    {
        ordered_json pj;
        pj["archimedean"] = ordered_json::array();
        for (const auto& a : pc.archimedean) {
            ordered_json e;
            e["root_re"] = detail::dec(Real(a.root.re, 160));
            e["root_im"] = detail::dec(Real(a.root.im, 160));
            Real mod2(a.root.re * a.root.re + a.root.im * a.root.im, 160);
            Real m(0, 160);
            mpf_sqrt(m.get_mpf_t(), mod2.get_mpf_t());
            e["modulus"] = detail::dec(m);
            e["stable"] = a.stable;
            e["complex_pair"] = a.complex_pair;
            pj["archimedean"].push_back(e);
        }
        pj["nonarchimedean"] = ordered_json::array();
        for (const auto& s : pc.nonarchimedean) {
            ordered_json e;
            e["p"] = s.p;
            e["slope"] = s.slope.get_str();
            e["length"] = s.length;
            e["stable"] = s.stable;
            e["evaluatable"] = s.evaluatable;
            if (s.evaluatable) e["root_valuation"] = s.root_valuation;
            else e["note"] = s.note;
            pj["nonarchimedean"].push_back(e);
        }
        j["places"] = pj;
    }

    ordered_json pis;
    if (pc.pisot.found()) {
        pis["side"] = pc.pisot.side == PisotSide::direct ? "direct" : "reciprocal";
        pis["monic_side"] = pc.pisot.monic_side.to_string();
        pis["beta"] = detail::dec(Real(pc.pisot.beta.re, 192));
        pis["is_unit"] = pc.pisot.is_unit;
    } else {
        pis["side"] = "none";
    }
    cls["pisot"] = pis;

    // entropies
    ordered_json ent;
    Real mahler = mahler_entropy(f, 160);
    ent["mahler"] = detail::dec(mahler);
    bool have_beta = true;
    std::string beta_note;
    try {
        BetaContext bc = make_beta_context(f, st.precision_bits);
        cls["digit_cap"] = bc.digit_cap;
        ordered_json bj;
        bj["beta"] = detail::dec(bc.beta_real(192));
        bj["beta_integral"] = bc.beta_integral;
        bj["minimal_poly"] = bc.minimal_poly.to_string();
        bj["digit_cap"] = bc.digit_cap;
        const ParryData* pdp = nullptr;
        ParryData pd;
        try {
            pd = parry_data(bc);
            pdp = &pd;
            bj["d1_finite"] = pd.d1_finite;
            if (pd.d1_finite) bj["d1"] = detail::json_int_vector(pd.d1);
            bj["dstar_preperiod"] = detail::json_int_vector(pd.dstar_pre);
            bj["dstar_period"] = detail::json_int_vector(pd.dstar_period);
            ParryAutomaton aut = build_automaton(pd);
            bj["automaton_states"] = aut.states();
            bj["finite_type"] = pd.d1_finite;
        } catch (const Error& e) {
            if (e.code != Errc::period_cap_exceeded) throw;
            bj["d1_finite"] = false;
            bj["dstar_note"] = "quasi-greedy expansion of 1 not eventually periodic within cap";
        }
        if (pc.pisot.found())
            bj["finitary_sufficient"] = finitary_sufficient(pc.pisot.monic_side);
        ShiftEntropy se = shift_entropy(bc, pdp, 160);
        ent["beta_shift_log"] = detail::dec(se.log_beta);
        if (se.automaton_log)
            ent["automaton_log"] = detail::dec(*se.automaton_log);
        Real gap = abs(mahler - se.log_beta);
        ent["mismatch"] = bool(gap > 1e-9);
        j["beta"] = bj;
    } catch (const Error& e) {
        if (e.code != Errc::not_pisot) throw;
        have_beta = false;
        beta_note = e.what();
        ent["mismatch"] = false;
    }
    if (!have_beta) {
        ordered_json bj;
        bj["note"] = beta_note;
        j["beta"] = bj;
    }
    cls["entropy"] = ent;
    j["classification"] = cls;

    j["notes"] = ordered_json::array();
    j["notes"].push_back(
        "fundamental-domain reduction uses the Z[theta] order of the monic side; "
        "identifications are computed up to its finite index in the maximal order");
}

/// error wrapper carrying the partial report for the CLI to print
struct ReportedError {
    ordered_json report;
    Error err;
    ReportedError(ordered_json r, Error e) : report(std::move(r)), err(std::move(e)) {}
};

inline ordered_json analyze_report(const std::string& raw, const ToolSettings& st) {
    AssociatedPoly f = parse_associated(raw);
    ordered_json j = report_header("analyze", raw, f, st);
    try {
        fill_classification(j, f, st);
    } catch (const Error& e) {
        j["refusal"] = std::string(errc_name(e.code)) + ": " + e.what();
        throw ReportedError(j, e);
    }
    return j;
}

inline ordered_json kernel_report(const std::string& raw, const ToolSettings& st) {
    AssociatedPoly f = parse_associated(raw);
    ordered_json j = report_header("kernel", raw, f, st);
    try {
        fill_classification(j, f, st);
        CodingContext ctx = make_coding_context(f, st.precision_bits, st.padic_digits);
        auto ker = kernel_periodic(ctx, st.max_period);
        auto render_periodic = [](const PeriodicSequence& ps, long lo, long hi) {
            std::string out = "…";
            long L = (long)ps.word.size();
            for (long j = 0; j < L; ++j) out += std::to_string(ps.at(lo - L + j));
            out += "|";
            for (long n = lo; n <= hi; ++n) {
                if (n == 1) out += ".";
                out += std::to_string(ps.at(n));
            }
            if (hi < 1) out += ".";
            out += "|";
            for (long j = 1; j <= L; ++j) out += std::to_string(ps.at(hi + j));
            out += "…";
            return out;
        };
        ordered_json arr = ordered_json::array();
        for (const auto& k : ker) {
            ordered_json e;
            e["word"] = detail::word_string(k.seq.word);
            e["phase"] = k.seq.phase;
            e["sequence"] = render_periodic(k.seq, -4, 4);
            e["q_plus"] = k.q_plus.to_string();
            arr.push_back(e);
        }
        j["kernel"] = ordered_json();
        j["kernel"]["max_period"] = st.max_period;
        j["kernel"]["members"] = arr;
        j["kernel"]["count"] = (long)ker.size();
    } catch (const Error& e) {
        j["refusal"] = std::string(errc_name(e.code)) + ": " + e.what();
        throw ReportedError(j, e);
    }
    return j;
}

inline ordered_json sample_report(const std::string& raw, const ToolSettings& st) {
    AssociatedPoly f = parse_associated(raw);
    ordered_json j = report_header("sample", raw, f, st);
    try {
        fill_classification(j, f, st);
        CodingContext ctx = make_coding_context(f, st.precision_bits, st.padic_digits);
        std::vector<std::pair<SeqInput, SeqInput>> inj;
        if (st.inject_witness && ctx.pd.d1_finite) {
            // delta_0 against the pure d*-tail rewrite of 1 (exact pair)
            SeqInput a = SeqInput::from_window(BiSequence::zeros(-2, 2));
            a.window.set(0, 1);
            SeqInput b;
            b.window = BiSequence::zeros(-2, 0);
            b.right_tail = ctx.pd.dstar_period;
            inj.emplace_back(a, b);
        }
        auto rep = almost_one_one_sample(ctx, st.samples, -st.window, st.window, st.epsilon,
                                         st.seed, inj);
        // serialized reduced phase points of the injected inputs
        ordered_json points = ordered_json::array();
        for (const auto& [a, b] : inj) {
            for (const SeqInput* s : {&a, &b}) {
                PhasePoint p = reduce_fundamental(code_sequence(*s, ctx), ctx);
                ordered_json pj;
                ordered_json arch = ordered_json::array();
                for (const auto& c : p.arch) {
                    ordered_json e;
                    e["re"] = detail::dec(c.re);
                    e["im"] = detail::dec(c.im);
                    arch.push_back(e);
                }
                pj["arch"] = arch;
                ordered_json pad = ordered_json::array();
                for (const auto& x : p.padic) pad.push_back(x.to_string());
                pj["padic"] = pad;
                points.push_back(pj);
            }
        }
        ordered_json sj;
        if (!points.empty()) sj["injected_points"] = points;
        sj["samples_requested"] = rep.samples;
        sj["distinct_sequences"] = rep.distinct;
        sj["window"] = st.window;
        sj["epsilon"] = st.epsilon;
        sj["collisions"] = rep.collisions;
        sj["kernel_explained"] = rep.kernel_explained;
        sj["unexplained"] = rep.unexplained;
        sj["injected_pairs"] = rep.injected_pairs;
        sj["injected_detected"] = rep.injected_detected;
        sj["injected_explained"] = rep.injected_explained;
        sj["sampling_measure"] =
            "uniform path measure on the Parry automaton (surrogate for Haar)";
        j["sampling"] = sj;
    } catch (const Error& e) {
        j["refusal"] = std::string(errc_name(e.code)) + ": " + e.what();
        throw ReportedError(j, e);
    }
    return j;
}

struct ExpandResult {
    ordered_json report;
    std::string digit_string;
};

// ---------------------------------------------------------------------------
// text rendering (deterministic, line-oriented)

inline void render_text(const ordered_json& j, std::string& out, const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (v.is_object()) {
            render_text(v, out, key);
        } else if (v.is_array()) {
            bool scalar = true;
            for (const auto& e : v)
                if (e.is_object() || e.is_array()) scalar = false;
            if (scalar) {
                out += key + " = " + v.dump() + "\n";
            } else {
                int idx = 0;
                for (const auto& e : v) {
                    render_text(e, out, key + "[" + std::to_string(idx) + "]");
                    ++idx;
                }
            }
        } else {
            out += key + " = " + v.dump() + "\n";
        }
    }
}

inline std::string to_text(const ordered_json& j) {
    std::string out;
    render_text(j, out, "");
    return out;
}

}  // namespace betadyn

#endif  // BETADYN_REPORT_HPP
