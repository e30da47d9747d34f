#pragma once

// Discriminant bound engine: root-discriminant bounds for division
// fields, degree caps from ingested Odlyzko-style tables, and the
// six-row table reproduction.

#include <abv/exactnum.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace abv {

struct unbounded_degree_error : std::runtime_error {
    unbounded_degree_error() : std::runtime_error("root discriminant exceeds every table threshold") {}
};

struct table_format_error : std::runtime_error {
    explicit table_format_error(const std::string& m) : std::runtime_error(m) {}
};

// Rows (rd_threshold, max_degree): any totally complex number field with
// root discriminant <= rd_threshold has degree <= max_degree. Thresholds
// strictly increasing, degrees non-decreasing.
class odlyzko_table {
public:
    struct row {
        Rat threshold;
        long max_degree;
        std::string signature;  // "C" = totally complex; carried for future use
    };

    static odlyzko_table parse(std::istream& in) {
        odlyzko_table t;
        std::string line;
        long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            while (!line.empty() && isspace((unsigned char)line.back())) line.pop_back();
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string thr, deg, sig = "C";
            if (!std::getline(ls, thr, ',') || !std::getline(ls, deg, ','))
                throw table_format_error("odlyzko table: bad row at line " + std::to_string(lineno));
            std::getline(ls, sig, ',');
            row r{rat_from_string(thr), std::stol(deg), sig};
            if (!t.rows_.empty()) {
                if (r.threshold <= t.rows_.back().threshold)
                    throw table_format_error("odlyzko table: thresholds must be strictly increasing");
                if (r.max_degree < t.rows_.back().max_degree)
                    throw table_format_error("odlyzko table: degrees must be non-decreasing");
            }
            t.rows_.push_back(std::move(r));
        }
        if (t.rows_.empty()) throw table_format_error("odlyzko table: empty");
        return t;
    }

    static odlyzko_table load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw table_format_error("odlyzko table: cannot open " + path);
        return parse(in);
    }

    const std::vector<row>& rows() const { return rows_; }

    // Degree cap for a field of the given root discriminant: smallest row
    // whose threshold is >= rd, decided exactly.
    long max_degree(const pow_product& rd) const {
        for (const auto& r : rows_)
            if (powprod_cmp(rd, pow_product::from_rational(r.threshold)) != ordering::GREATER)
                return r.max_degree;
        throw unbounded_degree_error();
    }

private:
    std::vector<row> rows_;
};

// Root-discriminant bound for the l^n-division field of a semistable
// variety with the given bad primes and effective stages:
//   l^{n + 1/(l-1)} * prod_p p^{1 - 1/l^{n - n0 + 1}}.
inline pow_product fontaine_joshi_bound(long ell, long n,
                                        const std::vector<std::pair<long, long>>& bad) {
    if (n < 1) throw std::domain_error("fontaine_joshi_bound: n >= 1 required");
    pow_product b = pow_product::power(make_rat(ell), Rat(n) + Rat(1, ell - 1));
    for (auto [p, n0] : bad) {
        if (p == ell) throw std::domain_error("fontaine_joshi_bound: ell must have good reduction");
        if (n0 < 1 || n0 > n)
            throw std::domain_error("fontaine_joshi_bound: need 1 <= n0 <= n");
        Int lp = 1;
        for (long i = 0; i < n - n0 + 1; ++i) lp *= ell;
        b = b * pow_product::power(make_rat(p), Rat(1) - Rat(1) / Rat(lp));
    }
    return b;
}

// |disc|^{1/degree} as an exact power product over the prime
// factorization of disc.
inline pow_product known_field_rd(const Int& disc, long degree) {
    if (degree < 1) throw std::domain_error("known_field_rd: degree >= 1 required");
    if (disc == 0) throw std::domain_error("known_field_rd: discriminant must be nonzero");
    return pow_product::power(Rat(abs(disc)), Rat(1, degree));
}

struct bound_report {
    long ell;
    long p;
    long n;
    pow_product bound;
    long degree_cap;
};

// The six (ell, p) pairs the case analysis covers, with their exact
// level-one bounds and degree caps.
inline std::vector<bound_report> table1(const odlyzko_table& t) {
    const std::pair<long, long> pairs[] = {{2, 3}, {2, 7}, {3, 2}, {3, 5}, {5, 2}, {5, 3}};
    std::vector<bound_report> out;
    for (auto [ell, p] : pairs) {
        pow_product b = fontaine_joshi_bound(ell, 1, {{p, 1}});
        out.push_back({ell, p, 1, b, t.max_degree(b)});
    }
    return out;
}

}  // namespace abv
