#pragma once

// Proof-trace exclusion engine: replays the case analyses that confine
// the ell-division field for the six covered (ell, p) pairs, the
// composite non-existence argument, and the nilpotent 2-division gate.
// Rules are scripted; all arithmetic side conditions are recomputed.

#include <abv/cft.hpp>
#include <abv/discbounds.hpp>
#include <abv/groups.hpp>
#include <abv/ramification.hpp>
#include <abv/tate.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace abv {

// ------------------------------------------------------------- traces

struct trace_step {
    long index;
    std::string rule;
    std::string premises;
    std::string conclusion;
    std::string cite;
};

struct proof_trace {
    std::vector<trace_step> steps;

    void add(std::string rule, std::string premises, std::string conclusion, std::string cite) {
        steps.push_back({(long)steps.size() + 1, std::move(rule), std::move(premises),
                         std::move(conclusion), std::move(cite)});
    }

    void absorb(const proof_trace& other) {
        for (const auto& s : other.steps) add(s.rule, s.premises, s.conclusion, s.cite);
    }

    std::string text() const {
        std::ostringstream os;
        for (const auto& s : steps)
            os << "STEP " << s.index << " RULE " << s.rule << " PREMISES " << s.premises
               << " CONCLUSION " << s.conclusion << " CITE " << s.cite << "\n";
        return os.str();
    }

    nlohmann::json json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : steps)
            arr.push_back({{"step", s.index},
                           {"rule", s.rule},
                           {"premises", s.premises},
                           {"conclusion", s.conclusion},
                           {"cite", s.cite}});
        return arr;
    }
};

enum class verdict_kind { CONTAINED, EXCLUDED, STUCK };

struct verdict {
    verdict_kind kind;
    std::optional<field_tag> field;  // target for CONTAINED
    std::vector<long> survivors;     // open candidate orders for STUCK; -1 = unbounded

    std::string str() const {
        switch (kind) {
            case verdict_kind::CONTAINED:
                return "CONTAINED " + (field ? field->str() : std::string("?"));
            case verdict_kind::EXCLUDED:
                return "EXCLUDED";
            case verdict_kind::STUCK: {
                std::string s = "STUCK {";
                for (size_t i = 0; i < survivors.size(); ++i)
                    s += (i ? "," : "") + std::to_string(survivors[i]);
                return s + "}";
            }
        }
        return "?";
    }
};

// ---------------------------------------------------------- citations

class citation_list {
public:
    static citation_list load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("citation list: cannot open " + path);
        citation_list c;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            c.content_ += line + "\n";
        }
        return c;
    }

    bool contains(const std::string& anchor) const {
        return !anchor.empty() && content_.find(anchor) != std::string::npos;
    }

private:
    std::string content_;
};

inline bool validate_trace(const proof_trace& tr, const citation_list& cites) {
    for (const auto& s : tr.steps)
        if (!cites.contains(s.cite)) return false;
    return true;
}

// --------------------------------------------------------- arithmetic

// orders m <= bound_H divisible by some ell(1 + c*ell), c >= 1, with
// 1 + c*ell an admissible Sylow count for m
inline std::set<long> candidate_orders(long ell, long bound_H) {
    if (ell < 3 || ell % 2 == 0) throw std::domain_error("candidate_orders: ell must be odd");
    if (bound_H < 1) throw std::domain_error("candidate_orders: bound_H >= 1 required");
    std::set<long> out;
    for (long m = 1; m <= bound_H; ++m)
        for (long c = 1; ell * (1 + c * ell) <= m; ++c) {
            long count = 1 + c * ell;
            if (m % (ell * count) != 0) continue;
            if (sylow_admissible_counts(m, ell).count(count)) {
                out.insert(m);
                break;
            }
        }
    return out;
}

// mu_n embeds in the field of q elements iff n divides q - 1
inline bool residue_root_check(long n, long q) {
    if (n < 1 || q < 2) throw std::domain_error("residue_root_check: n >= 1, q >= 2 required");
    return (q - 1) % n == 0;
}

namespace detail {

// parse "3^7*5^4" into its integer value
inline Int parse_pow_int(const std::string& s) {
    Int out = 1;
    std::istringstream is(s);
    std::string factor;
    while (std::getline(is, factor, '*')) {
        auto caret = factor.find('^');
        Int base(caret == std::string::npos ? factor : factor.substr(0, caret));
        unsigned long e = caret == std::string::npos
                              ? 1UL
                              : std::stoul(factor.substr(caret + 1));
        out *= int_pow(base, e);
    }
    return out;
}

inline std::string join(const std::set<long>& s) {
    std::string out = "{";
    bool first = true;
    for (long x : s) {
        out += (first ? "" : ",") + std::to_string(x);
        first = false;
    }
    return out + "}";
}

}  // namespace detail

// --------------------------------------------------------------- engine

class exclusion_engine {
public:
    exclusion_engine(odlyzko_table table, axiom_ledger ledger,
                     std::set<std::string> disabled_rules = {})
        : table_(std::move(table)), ledger_(std::move(ledger)),
          disabled_(std::move(disabled_rules)) {
        for (const auto& r : disabled_)
            if (std::find(rule_names().begin(), rule_names().end(), r) == rule_names().end())
                throw std::domain_error("exclusion_engine: unknown rule " + r);
    }

    static const std::vector<std::string>& rule_names() {
        static const std::vector<std::string> names = {
            "solvable",        "degree_cap",    "abelian_layer", "g2_ell_group",
            "sylow_candidates", "g1_parity",    "wild_inertia_normal", "class_parity",
            "unramified_rd",   "kronecker_weber_cap", "tame_residue", "cubic_kummer",
            "class_number_one"};
        return names;
    }

    // odd-ell containment: L inside Q(mu_ell, p^(1/ell))
    std::pair<verdict, proof_trace> run_odd(long ell, long p) const {
        bool supported = (ell == 3 && (p == 2 || p == 5)) || (ell == 5 && (p == 2 || p == 3));
        if (!supported) throw std::domain_error("run_odd: unsupported (ell, p) pair");
        proof_trace tr;
        field_tag F = field_tag::cyclotomic(ell);
        field_tag target = F.compose(field_tag::pure_radical(ell, p));
        std::string pair = "ell=" + std::to_string(ell) + " p=" + std::to_string(p);

        bool solvable_ok = false, layer_ok = false, ellgroup_ok = false, bound_ok = false,
             candidates_ok = false;
        long cap = 0, bound_H = 0;
        std::set<long> survivors;

        if (on("degree_cap")) {
            auto b = fontaine_joshi_bound(ell, 1, {{p, 1}});
            cap = table_.max_degree(b);
            bound_H = cap / (ell - 1);
            bound_ok = true;
            tr.add("degree_cap", pair + " rd < " + b.str() + " = " + b.decimal(2),
                   "[L:Q] <= " + std::to_string(cap) + " so |H| <= " + std::to_string(bound_H),
                   "discriminant tables cap the degree of a number field");
        }
        if (on("solvable") && bound_ok && bound_H < 60) {
            solvable_ok = ledger_.lookup(field_tag::global(), "solvable_below_60").value == "true";
            tr.add("solvable", "|H| <= " + std::to_string(bound_H) + " < 60",
                   "H is solvable; a nontrivial H has a nontrivial abelian quotient",
                   "groups of order below 60 are solvable");
        }
        if (on("abelian_layer")) {
            long s = splitting_in_cyclotomic(ell, p);
            bool hF1 = ledger_.lookup(F, "class_number").value == "1";
            if (s == 1 && hF1) {
                layer_ok = true;
                tr.add("abelian_layer",
                       pair + " primes over p in F: 1, h(F) = 1",
                       "the maximal abelian layer over F is E = " + target.str() +
                           "; a nontrivial H has order divisible by " + std::to_string(ell),
                       "with one prime over p and class number one, the abelian layer is "
                       "F(p^(1/l))");
            }
        }
        if (on("g2_ell_group") && layer_ok) {
            ellgroup_ok = true;
            tr.add("g2_ell_group",
                   "the maximal abelian quotient of H has order " + std::to_string(ell),
                   "an ell-group H of order >= " + std::to_string(ell * ell) +
                       " would have an abelian quotient of order " + std::to_string(ell * ell) +
                       "; hence an ell-group H has |H| = " + std::to_string(ell) + " and L = E",
                   "an l-group of order at least l^2 has an abelian quotient of order l^2");
        }
        if (on("sylow_candidates") && bound_ok && solvable_ok) {
            survivors = candidate_orders(ell, bound_H);
            candidates_ok = true;
            std::string concl;
            if (survivors.empty())
                concl = "|H| <= " + std::to_string(bound_H) + " < " +
                        std::to_string(ell * (1 + ell)) + "; no non-ell-group order survives";
            else
                concl = "surviving non-ell-group orders " + detail::join(survivors);
            tr.add("sylow_candidates",
                   "a non-normal ell-Sylow count is 1 + c*ell, c >= 1, so ell(1+c*ell) "
                   "divides |H| <= " + std::to_string(bound_H),
                   concl, "a non-normal l-Sylow subgroup occurs 1 + cl times with c >= 1");
        } else {
            survivors = {-1};
        }

        if (on("g1_parity") && candidates_ok) {
            for (auto it = survivors.begin(); it != survivors.end();) {
                if (*it % 4 == 2) {
                    tr.add("g1_parity",
                           "|H| = " + std::to_string(*it) + " = 2 mod 4",
                           "a quotient of order 2 would make the maximal abelian quotient "
                           "even, but it has odd order " + std::to_string(ell) +
                               "; eliminated " + std::to_string(*it),
                           "a group of order 2n with n odd has a quotient of order 2");
                    it = survivors.erase(it);
                } else {
                    ++it;
                }
            }
        }

        bool wild_ok = false;
        if (ell == 3 && p == 5 && candidates_ok) {
            if (on("wild_inertia_normal") && !survivors.empty() &&
                ledger_.lookup(field_tag::global(), "wild_inertia_normal").value == "true") {
                wild_ok = true;
                tr.add("wild_inertia_normal",
                       "surviving orders have a non-normal 3-Sylow subgroup",
                       "the prime over 3 in E splits in L/E and L/E is unramified "
                       "everywhere: an unramified quadratic extension of E exists when "
                       "[L:E] = 4 or 8, and L/E itself is unramified when [L:E] = 7",
                       "wild inertia is normal in the decomposition group, so the prime "
                       "over l splits in L/E");
            }
            if (on("class_parity") && wild_ok) {
                bool odd_h = ledger_.lookup(target, "class_number_parity").value == "odd";
                for (long m : std::vector<long>{12, 24})
                    if (odd_h && survivors.erase(m))
                        tr.add("class_parity",
                               "|H| = " + std::to_string(m) + " gives [L:E] = " +
                                   std::to_string(m / 3) + " and h(" + target.str() + ") is odd",
                               "no unramified quadratic extension of E exists; eliminated " +
                                   std::to_string(m),
                               "an odd class number admits no unramified quadratic extension");
            }
            if (on("unramified_rd") && wild_ok && survivors.count(21)) {
                Int discE =
                    detail::parse_pow_int(ledger_.lookup(target, "abs_discriminant").value);
                auto rd = known_field_rd(discE, 6);
                long cap2 = table_.max_degree(rd);
                long deg = (ell - 1) * 21;
                if (cap2 < deg) {
                    survivors.erase(21);
                    tr.add("unramified_rd",
                           "|H| = 21: L/E unramified, |d_E| = " + discE.get_str() +
                               ", [E:Q] = 6",
                           "rd(L) = " + rd.str() + " = " + rd.decimal(2) +
                               " forces [L:Q] <= " + std::to_string(cap2) + " < " +
                               std::to_string(deg) + "; eliminated 21",
                           "the root discriminant is unchanged in an unramified extension");
                }
            }
        }

        bool closed = solvable_ok && layer_ok && ellgroup_ok && candidates_ok &&
                      survivors.empty();
        if (closed) {
            tr.add("containment", "every case branch closed",
                   "CONTAINED " + target.str(),
                   "with one prime over p and class number one, the abelian layer is "
                   "F(p^(1/l))");
            return {verdict{verdict_kind::CONTAINED, target, {}}, tr};
        }
        return {verdict{verdict_kind::STUCK, std::nullopt,
                        std::vector<long>(survivors.begin(), survivors.end())},
                tr};
    }

    // ell = 2 containment: L inside Q(mu_4, sqrt(p))
    std::pair<verdict, proof_trace> run_two(long p) const {
        if (p != 3 && p != 7) throw std::domain_error("run_two: p must be 3 or 7");
        proof_trace tr;
        long d_real = (p == 3) ? 12 : 28;
        long d_imag = (p == 3) ? -3 : -7;
        field_tag target = field_tag::cyclotomic(4).compose(field_tag::quadratic(d_real));
        std::set<long> survivors;
        bool solvable_ok = false, kw_ok = false, bound_ok = false, g2_ok = false;
        long cap = 0;

        if (on("degree_cap")) {
            auto b = fontaine_joshi_bound(2, 1, {{p, 1}});
            cap = table_.max_degree(b);
            bound_ok = true;
            tr.add("degree_cap", "ell=2 p=" + std::to_string(p) + " rd < " + b.str() + " = " +
                                     b.decimal(2),
                   "[L:Q] <= " + std::to_string(cap),
                   "discriminant tables cap the degree of a number field");
        }
        if (on("solvable") && bound_ok && cap < 60) {
            solvable_ok = ledger_.lookup(field_tag::global(), "solvable_below_60").value == "true";
            tr.add("solvable", "[L:Q] <= " + std::to_string(cap) + " < 60",
                   "Gal(L/Q) is solvable; if L is nontrivial its maximal abelian "
                   "subfield E0 is nontrivial",
                   "groups of order below 60 are solvable");
        }
        if (on("kronecker_weber_cap")) {
            bool kw = ledger_.lookup(field_tag::global(), "kronecker_weber").value == "true";
            long two_cap = cyclotomic_cap(2, 1);
            if (kw && two_cap == 2) {
                kw_ok = true;
                tr.add("kronecker_weber_cap",
                       "E0 is abelian over Q, unramified outside {2, p}, tame of degree "
                       "<= 2 over p; 2-cyclotomic level cap = " + std::to_string(two_cap),
                       "E0 is contained in Q(mu_4, sqrt(" + std::to_string(p) + "))",
                       "the 2-power cyclotomic part is capped at the fourth roots of unity");
            }
        }
        if (on("g2_ell_group")) {
            g2_ok = true;
            tr.add("g2_ell_group",
                   "E0 is the maximal abelian subfield",
                   "a 2-group layer of order >= 4 would give an abelian quotient of "
                   "order 4 over E0's degree; hence [E1:E0] is odd in the quadratic "
                   "branch and Gal(L/Q) is not a 2-group in the biquadratic branch",
                   "an l-group of order at least l^2 has an abelian quotient of order l^2");
        }

        // branch A: i not in L, E0 a quadratic field
        for (long d : {d_imag, d_real}) {
            if (!g2_ok) {
                survivors.insert(-1);
                break;
            }
            long residue = (d % 2 == 0) ? 2 : ((((d % 8) + 8) % 8 == 1) ? 2 : 4);
            bool tame_ok = false;
            std::set<long> odd_n;  // possible nontrivial tame degrees over 2
            if (on("tame_residue")) {
                tame_ok = true;
                for (long n = 3; n < residue; n += 2)
                    if (residue_root_check(n, residue)) odd_n.insert(n);
                tr.add("tame_residue",
                       "E0 = Q(sqrt(disc " + std::to_string(d) + ")), residue field over 2 "
                       "has size " + std::to_string(residue),
                       odd_n.empty()
                           ? "any odd tame degree n > 1 needs mu_n in the residue field; "
                             "only n = 1 is possible, so E1/E0 is unramified over 2"
                           : "odd tame degree n in " + detail::join(odd_n) + " must be examined",
                       "tame ramification of degree n requires mu_n inside the residue field");
            } else {
                survivors.insert(-1);
                continue;
            }
            if (!odd_n.empty()) {
                if (on("cubic_kummer") && d == -3 && odd_n == std::set<long>{3} &&
                    ledger_.lookup(field_tag::quadratic(-3), "no_cubic_unramified_outside_2")
                            .value == "true") {
                    tr.add("cubic_kummer", "candidate cubic layer over Q(sqrt(-3))",
                           "no Galois cubic extension of Q(sqrt(-3)) unramified outside 2 "
                           "exists; n = 3 eliminated",
                           "Q(sqrt(-3)) has no Galois cubic extension unramified outside 2");
                    odd_n.clear();
                } else {
                    for (long n : odd_n) survivors.insert(n);
                    continue;
                }
            }
            if (on("class_number_one") && tame_ok) {
                long h = quadratic_class_number(d);
                if (h == 1)
                    tr.add("class_number_one",
                           "h(disc " + std::to_string(d) + ") = 1 and E1/E0 would be a "
                           "nontrivial unramified abelian extension",
                           "quadratic branch disc " + std::to_string(d) + " closed",
                           "class number one admits no nontrivial unramified abelian "
                           "extension");
                else
                    survivors.insert(-1);
            } else {
                survivors.insert(-1);
            }
        }

        // branch B: i in L, E0 = Q(mu_4, sqrt(p))
        if (bound_ok && g2_ok) {
            std::set<long> degs;
            for (long m = 8; m <= cap; m += 4) {
                long q = m;
                while (q % 2 == 0) q /= 2;
                if (q != 1) degs.insert(m);  // not a 2-power
            }
            tr.add("g2_ell_group",
                   "[L:Q] is a nontrivial multiple of 4 bounded by " + std::to_string(cap) +
                       " and Gal(L/Q) is not a 2-group",
                   degs.empty() ? "no admissible degree survives in the biquadratic branch"
                                : "surviving degrees " + detail::join(degs),
                   "an l-group of order at least l^2 has an abelian quotient of order l^2");
            for (auto it = degs.begin(); it != degs.end();) {
                long n = *it / 4;
                bool eliminated = false;
                if (on("tame_residue") && !residue_root_check(n, 2)) {
                    if (on("class_number_one") &&
                        ledger_.lookup(target, "class_number").value == "1") {
                        tr.add("class_number_one",
                               "[L:Q] = " + std::to_string(*it) + ": L/E0 cyclic of degree " +
                                   std::to_string(n) + ", residue field F_2 admits no mu_" +
                                   std::to_string(n) + ", so L/E0 is unramified; h(" +
                                   target.str() + ") = 1",
                               "eliminated [L:Q] = " + std::to_string(*it),
                               "class number one admits no nontrivial unramified abelian "
                               "extension");
                        eliminated = true;
                    }
                }
                if (eliminated)
                    it = degs.erase(it);
                else
                    ++it;
            }
            for (long m : degs) survivors.insert(m);
        } else {
            survivors.insert(-1);
        }

        bool closed = solvable_ok && kw_ok && g2_ok && bound_ok && survivors.empty();
        if (closed) {
            tr.add("containment", "every case branch closed", "CONTAINED " + target.str(),
                   "the 2-power cyclotomic part is capped at the fourth roots of unity");
            return {verdict{verdict_kind::CONTAINED, target, {}}, tr};
        }
        return {verdict{verdict_kind::STUCK, std::nullopt,
                        std::vector<long>(survivors.begin(), survivors.end())},
                tr};
    }

    // composite non-existence trace for one prime p <= 7
    std::pair<verdict, proof_trace> theorem42(long p) const {
        if (p != 2 && p != 3 && p != 5 && p != 7)
            throw std::domain_error("theorem42: p must be in {2,3,5,7}");
        proof_trace tr;
        long ell = (p == 3 || p == 7) ? 2 : 3;
        tr.add("ell_choice", "p = " + std::to_string(p),
               "auxiliary prime ell = " + std::to_string(ell),
               "an auxiliary prime l is chosen from the covered column of the bound table");
        auto [v, sub] = (ell == 2) ? run_two(p) : run_odd(ell, p);
        tr.absorb(sub);
        if (v.kind != verdict_kind::CONTAINED)
            return {verdict{verdict_kind::STUCK, std::nullopt, v.survivors}, tr};
        long s = splitting_in_cyclotomic(ell, p);
        tr.add("one_prime", "p is undecomposed in the cyclotomic layer (count " +
                                std::to_string(s) + ") and totally ramified in the kummer layer",
               "one prime lies over p in the ell-division field",
               "a single prime lies over p in the target field");
        inertia_module M(ell, 1, 1, {{Int(1)}});
        auto tw = tower(M, 3, kernel_strategy::FLAG_M1);
        std::string stages;
        for (const auto& pt : tw.points) stages += std::to_string(pt.stage) + " ";
        tr.add("stage_tower",
               "synthetic semistable module, 3 isogeny steps with kernel M1bar",
               "effective stages " + stages + "grow by one per step without bound",
               "an isogeny with kernel between the reduced flags raises the effective "
               "stage by one");
        bool faltings =
            ledger_.lookup(field_tag::global(), "faltings_finiteness").value == "true";
        tr.add("faltings_maximality",
               std::string("a representative of maximal effective stage exists: ") +
                   (faltings ? "isogeny class finiteness" : "unknown"),
               "EXCLUDED: the stage-raising isogeny contradicts maximality; no semistable "
               "abelian variety over Q has good reduction outside " + std::to_string(p),
               "only finitely many varieties lie in one isogeny class up to isomorphism");
        return {verdict{verdict_kind::EXCLUDED, std::nullopt, {}}, tr};
    }

    // nilpotent 2-division gate: p = 3 mod 4 is excluded
    std::pair<std::string, proof_trace> prop43_gate(long p) const {
        if (p < 3 || p % 2 == 0) throw std::domain_error("prop43_gate: p must be an odd prime");
        proof_trace tr;
        if (p % 4 == 1) {
            tr.add("residue_class", "p = " + std::to_string(p) + " = 1 mod 4",
                   "NO-OBSTRUCTION: p splits in Q(i); the inertness argument does not apply",
                   "a prime p = 1 mod 4 splits in Q(i)");
            return {"NO-OBSTRUCTION", tr};
        }
        bool no_odd =
            ledger_.lookup(field_tag::global(), "no_odd_abelian_outside_2").value == "true";
        tr.add("nilpotent_two_group",
               std::string("Gal nilpotent; an odd cyclic quotient would give ") +
                   (no_odd ? "a forbidden extension" : "unknown"),
               "the Galois group of the 2-division field is a 2-group",
               "no nontrivial abelian extension of Q has odd degree and is unramified "
               "outside 2");
        tr.add("inert_in_mu4", "p = " + std::to_string(p) + " = 3 mod 4",
               "p is inert in Q(i); a quadratic subfield split over p cannot exist",
               "a prime p = 3 mod 4 is inert in Q(i)");
        tr.add("full_decomposition",
               "any proper decomposition group sits under an index-2 subgroup",
               "the decomposition group is everything: one prime lies over p",
               "a full decomposition group leaves one prime over p");
        inertia_module M(2, 1, 1, {{Int(1)}});
        auto tw = tower(M, 3, kernel_strategy::FLAG_M1);
        std::string stages;
        for (const auto& pt : tw.points) stages += std::to_string(pt.stage) + " ";
        tr.add("stage_tower", "synthetic semistable module at ell = 2, kernel M1bar",
               "effective stages " + stages + "grow by one per step without bound",
               "an isogeny with kernel between the reduced flags raises the effective "
               "stage by one");
        tr.add("faltings_maximality", "a representative of maximal effective stage exists",
               "NONEXISTENT: contradiction with maximality",
               "only finitely many varieties lie in one isogeny class up to isomorphism");
        return {"NONEXISTENT", tr};
    }

private:
    bool on(const std::string& rule) const { return disabled_.count(rule) == 0; }

    odlyzko_table table_;
    axiom_ledger ledger_;
    std::set<std::string> disabled_;
};

}  // namespace abv
