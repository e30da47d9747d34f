#pragma once

// Cyclotomic splitting arithmetic, a brute-force class-number oracle for
// quadratic fields, and the citation-backed axiom ledger for field
// invariants consumed as established facts.

#include <abv/exactnum.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace abv {

struct unknown_axiom_error : std::runtime_error {
    explicit unknown_axiom_error(const std::string& key)
        : std::runtime_error("no axiom ledger entry for " + key) {}
};

struct inconclusive_error : std::runtime_error {
    explicit inconclusive_error(const std::string& m) : std::runtime_error(m) {}
};

// Symbolic field descriptor with structural equality. Canonical text:
//   cyc(n)        cyclotomic field of n-th roots of unity
//   quad(D)       quadratic field of fundamental discriminant D
//   rad(l,p)      pure radical field adjoining p^(1/l)
//   a*b           compositum, components sorted
//   global        carrier for field-independent axioms
class field_tag {
public:
    static field_tag cyclotomic(long n) { return field_tag("cyc(" + std::to_string(n) + ")"); }
    static field_tag quadratic(long disc) { return field_tag("quad(" + std::to_string(disc) + ")"); }
    static field_tag pure_radical(long ell, long p) {
        return field_tag("rad(" + std::to_string(ell) + "," + std::to_string(p) + ")");
    }
    static field_tag global() { return field_tag("global"); }

    field_tag compose(const field_tag& o) const {
        std::vector<std::string> parts = split(name_);
        for (auto& p : split(o.name_)) parts.push_back(p);
        std::sort(parts.begin(), parts.end());
        parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
        std::string s;
        for (auto& p : parts) s += (s.empty() ? "" : "*") + p;
        return field_tag(s);
    }

    static field_tag parse(const std::string& s) {
        field_tag t(s);
        for (const auto& part : split(s))
            if (!valid_atom(part)) throw std::domain_error("field_tag: bad syntax: " + s);
        // re-canonicalize ordering
        field_tag canon = field_tag("");
        bool first = true;
        for (const auto& part : split(s)) {
            if (first) {
                canon = field_tag(part);
                first = false;
            } else {
                canon = canon.compose(field_tag(part));
            }
        }
        return canon;
    }

    const std::string& str() const { return name_; }
    bool operator==(const field_tag& o) const = default;
    auto operator<=>(const field_tag& o) const = default;

private:
    explicit field_tag(std::string n) : name_(std::move(n)) {}
    std::string name_;

    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == '*') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    }

    static bool valid_atom(const std::string& a) {
        if (a == "global") return true;
        for (const char* prefix : {"cyc(", "quad(", "rad("})
            if (a.rfind(prefix, 0) == 0 && a.back() == ')') return true;
        return false;
    }
};

// Multiplicative order of p modulo ell.
inline long mult_order(long p, long ell) {
    long x = p % ell;
    if (x < 0) x += ell;
    if (x == 0) throw std::domain_error("mult_order: p divisible by ell");
    long o = 1, cur = x;
    while (cur != 1) {
        cur = (cur * p) % ell;
        ++o;
    }
    return o;
}

// Number of primes over p in the cyclotomic field adjoined at level ell
// (Q(mu_ell) for odd ell, Q(mu_4) for ell = 2).
inline long splitting_in_cyclotomic(long ell, long p) {
    if (ell == p) throw std::domain_error("splitting_in_cyclotomic: requires p != ell");
    if (ell == 2) return (p % 4 == 3) ? 1 : 2;
    return (ell - 1) / mult_order(p, ell);
}

struct abelian_layer_result {
    long rank_bound;
    std::vector<field_tag> candidates;
    bool resolved;  // false when rank_bound > 1 leaves the layer undetermined
};

// The maximal abelian layer over the cyclotomic base: elementary abelian
// of rank at most s; for s = 1 the candidates are the base and the
// radical extension by p^(1/ell).
inline abelian_layer_result abelian_layer(long ell, long p) {
    long s = splitting_in_cyclotomic(ell, p);
    long mu = (ell == 2) ? 4 : ell;
    if (s == 1)
        return {1,
                {field_tag::cyclotomic(mu),
                 field_tag::cyclotomic(mu).compose(field_tag::pure_radical(ell, p))},
                true};
    return {s, {}, false};
}

inline bool is_squarefree(long n) {
    n = std::abs(n);
    for (long d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0) return false;
    return true;
}

inline bool is_fundamental_discriminant(long d) {
    if (d == 1 || d == 0) return false;
    long m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) return is_squarefree(d);
    if (m4 == 0) {
        long m = d / 4;
        long mm4 = ((m % 4) + 4) % 4;
        return (mm4 == 2 || mm4 == 3) && is_squarefree(m);
    }
    return false;
}

// Imaginary case: count reduced binary quadratic forms (a,b,c) of
// discriminant d < 0 with |b| <= a <= c, b >= 0 when |b| = a or a = c.
inline long class_number_imaginary(long d) {
    long count = 0;
    for (long a = 1; 3 * a * a <= -d; ++a) {
        for (long b = -a + 1; b <= a; ++b) {  // reduced: -a < b <= a <= c, b >= 0 if a = c
            long num = b * b - d;
            if (num % (4 * a) != 0) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            ++count;
        }
    }
    return count;
}

// Real case: Minkowski-bound prime enumeration plus a bounded search for
// norm-equation solutions establishing principality of each prime ideal.
// Sound but not complete: raises inconclusive_error rather than guess.
inline long class_number_real(long d) {
    long mink = (long)(std::sqrt((double)d) / 2.0);  // floor(sqrt(d)/2)
    while ((mink + 1) * (mink + 1) * 4 <= d) ++mink;
    while (mink * mink * 4 > d) --mink;
    const long box = 1000;
    for (long q = 2; q <= mink; ++q) {
        bool prime = true;
        for (long t = 2; t * t <= q; ++t)
            if (q % t == 0) prime = false;
        if (!prime) continue;
        // splitting of q: d a QR mod 4q <-> ideal of norm q exists
        bool has_ideal = false;
        for (long b = 0; b <= 2 * q; ++b)
            if (((b * b - d) % (4 * q) + 4 * q) % (4 * q) == 0) has_ideal = true;
        if (!has_ideal) continue;  // inert, contributes nothing
        // principality: find x,y with x^2 - d y^2 = +-4q
        bool principal = false;
        for (long y = 0; y <= box && !principal; ++y)
            for (long x = 0; x <= box; ++x) {
                long lhs = x * x - d * y * y;
                if (lhs == 4 * q || lhs == -4 * q) {
                    principal = true;
                    break;
                }
                if (x * x > d * y * y + 4 * q) break;  // lhs only grows from here
            }
        if (!principal)
            throw inconclusive_error("class_number_real: prime " + std::to_string(q) +
                                     " not proven principal within search box");
    }
    return 1;  // every class-group generator shown principal
}

inline long quadratic_class_number(long disc) {
    if (!is_fundamental_discriminant(disc))
        throw std::domain_error("quadratic_class_number: not a fundamental discriminant");
    if (std::abs(disc) > 10000)
        throw std::domain_error("quadratic_class_number: |disc| <= 10^4 required");
    return disc < 0 ? class_number_imaginary(disc) : class_number_real(disc);
}

struct axiom_entry {
    field_tag field;
    std::string invariant;
    std::string value;
    std::string citation;
};

// Ledger of asserted field invariants, each with a citation. Loaded from
// `tag|invariant|value|citation` lines; duplicates rejected.
class axiom_ledger {
public:
    static axiom_ledger parse(std::istream& in) {
        axiom_ledger l;
        std::string line;
        long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string tag, inv, val, cite;
            if (!std::getline(ls, tag, '|') || !std::getline(ls, inv, '|') ||
                !std::getline(ls, val, '|') || !std::getline(ls, cite))
                throw std::runtime_error("axiom ledger: bad record at line " +
                                         std::to_string(lineno));
            axiom_entry e{field_tag::parse(tag), inv, val, cite};
            auto key = std::make_pair(e.field, e.invariant);
            if (l.entries_.count(key))
                throw std::runtime_error("axiom ledger: duplicate entry " + tag + "|" + inv);
            l.entries_.emplace(key, std::move(e));
        }
        return l;
    }

    static axiom_ledger load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("axiom ledger: cannot open " + path);
        return parse(in);
    }

    const axiom_entry& lookup(const field_tag& f, const std::string& invariant) const {
        auto it = entries_.find({f, invariant});
        if (it == entries_.end()) throw unknown_axiom_error(f.str() + "|" + invariant);
        return it->second;
    }

    size_t size() const { return entries_.size(); }

private:
    std::map<std::pair<field_tag, std::string>, axiom_entry> entries_;
};

}  // namespace abv
