#pragma once

// Small permutation-group engine: orders, abelianizations, Sylow
// counting, and the group-theoretic side conditions the exclusion
// engine relies on, verified on concrete groups.

#include <abv/exactnum.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace abv {

struct group_size_error : std::runtime_error {
    explicit group_size_error(const std::string& m) : std::runtime_error(m) {}
};

// Permutation of {0..n-1} as its image vector.
using perm = std::vector<int>;

inline perm perm_identity(int n) {
    perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
}

inline perm perm_compose(const perm& a, const perm& b) {  // (a*b)(x) = a(b(x))
    perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
}

inline perm perm_inverse(const perm& a) {
    perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[a[i]] = (int)i;
    return r;
}

// Parses disjoint-cycle notation like "(1 2 3)(4 5)"; points 1-based.
inline perm perm_from_cycles(const std::string& s, int degree) {
    perm p = perm_identity(degree);
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '(') {
            if (!isspace((unsigned char)s[i])) throw std::domain_error("bad cycle notation: " + s);
            ++i;
            continue;
        }
        size_t close = s.find(')', i);
        if (close == std::string::npos) throw std::domain_error("unterminated cycle: " + s);
        std::istringstream cyc(s.substr(i + 1, close - i - 1));
        std::vector<int> pts;
        int x;
        while (cyc >> x) {
            if (x < 1 || x > degree) throw std::domain_error("cycle point out of range: " + s);
            pts.push_back(x - 1);
        }
        for (size_t k = 0; k < pts.size(); ++k) p[pts[k]] = pts[(k + 1) % pts.size()];
        i = close + 1;
    }
    // must be a bijection
    std::set<int> img(p.begin(), p.end());
    if ((int)img.size() != degree) throw std::domain_error("cycles overlap: " + s);
    return p;
}

inline std::vector<perm> closure(const std::vector<perm>& gens, int degree, size_t cap) {
    std::set<perm> seen{perm_identity(degree)};
    std::vector<perm> frontier{perm_identity(degree)};
    while (!frontier.empty()) {
        std::vector<perm> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                perm y = perm_compose(g, x);
                if (seen.insert(y).second) {
                    next.push_back(std::move(y));
                    if (seen.size() > cap)
                        throw group_size_error("group closure exceeds cap " + std::to_string(cap));
                }
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

class perm_group {
public:
    static constexpr size_t kOrderCap = 100000;
    static constexpr size_t kEnumCap = 2000;  // subgroup enumeration bound

    perm_group(int degree, std::vector<perm> gens) : degree_(degree), gens_(std::move(gens)) {
        for (const auto& g : gens_)
            if ((int)g.size() != degree_) throw std::domain_error("generator degree mismatch");
        if (gens_.empty()) gens_.push_back(perm_identity(degree_));
        elements_ = closure(gens_, degree_, kOrderCap);
        std::sort(elements_.begin(), elements_.end());
    }

    int degree() const { return degree_; }
    const std::vector<perm>& generators() const { return gens_; }
    const std::vector<perm>& elements() const { return elements_; }
    long order() const { return (long)elements_.size(); }
    bool contains(const perm& p) const {
        return std::binary_search(elements_.begin(), elements_.end(), p);
    }

private:
    int degree_;
    std::vector<perm> gens_;
    std::vector<perm> elements_;
};

// Derived subgroup: closure of all element commutators (already normal).
inline std::vector<perm> derived_subgroup(const perm_group& G) {
    std::vector<perm> comms;
    std::set<perm> seen;
    for (const auto& a : G.elements())
        for (const auto& b : G.elements()) {
            perm c = perm_compose(perm_compose(a, b),
                                  perm_compose(perm_inverse(a), perm_inverse(b)));
            if (seen.insert(c).second) comms.push_back(c);
        }
    return closure(comms, G.degree(), perm_group::kOrderCap);
}

inline long abelianization_order(const perm_group& G) {
    return G.order() / (long)derived_subgroup(G).size();
}

inline bool is_prime_power(long n, long ell) {
    while (n % ell == 0) n /= ell;
    return n == 1;
}

inline long perm_order(const perm& p) {
    long o = 1;
    perm cur = p;
    perm id = perm_identity((int)p.size());
    while (cur != id) {
        cur = perm_compose(p, cur);
        ++o;
    }
    return o;
}

namespace detail {

inline std::vector<perm> conjugate_set(const std::vector<perm>& S, const perm& g) {
    perm gi = perm_inverse(g);
    std::vector<perm> out;
    out.reserve(S.size());
    for (const auto& s : S) out.push_back(perm_compose(perm_compose(g, s), gi));
    std::sort(out.begin(), out.end());
    return out;
}

// Grow an ell-subgroup to a maximal one (Sylow) inside G.
inline std::vector<perm> find_sylow(const perm_group& G, long ell) {
    long n = G.order(), sylow_order = 1;
    while (n % ell == 0) {
        n /= ell;
        sylow_order *= ell;
    }
    std::vector<perm> P{perm_identity(G.degree())};
    std::sort(P.begin(), P.end());
    while ((long)P.size() < sylow_order) {
        bool grew = false;
        // any ell-element of the normalizer outside P extends P
        for (const auto& y : G.elements()) {
            if (std::binary_search(P.begin(), P.end(), y)) continue;
            if (!is_prime_power(perm_order(y), ell)) continue;
            if (detail::conjugate_set(P, y) != P) continue;  // must normalize P
            std::vector<perm> gens = P;
            gens.push_back(y);
            auto Q = closure(gens, G.degree(), perm_group::kOrderCap);
            if (is_prime_power((long)Q.size(), ell)) {
                std::sort(Q.begin(), Q.end());
                P = std::move(Q);
                grew = true;
                break;
            }
        }
        if (!grew) throw std::logic_error("find_sylow: stuck below Sylow order");
    }
    return P;
}

}  // namespace detail

// Number of ell-Sylow subgroups, counted as distinct conjugates of one.
inline long sylow_count(const perm_group& G, long ell) {
    if (G.order() % ell != 0)
        throw std::domain_error("sylow_count: ell does not divide the group order");
    if (G.order() > (long)perm_group::kEnumCap)
        throw group_size_error("sylow_count: order above enumeration bound");
    auto P = detail::find_sylow(G, ell);
    std::set<std::vector<perm>> conjugates;
    for (const auto& g : G.elements()) conjugates.insert(detail::conjugate_set(P, g));
    return (long)conjugates.size();
}

// |H| = 2n with n odd forces a quotient of order 2 (via an even
// abelianization); vacuously true when |H| != 2 mod 4.
inline bool check_G1(const perm_group& G) {
    if (G.order() % 4 != 2) return true;
    return abelianization_order(G) % 2 == 0;
}

// An ell-group of order >= ell^2 has a (normal, abelian) quotient of
// order ell^2. Checked by enumerating index-ell^2 subgroups of the
// abelianization, through which any order-ell^2 quotient factors.
inline bool check_G2(const perm_group& G, long ell) {
    if (!is_prime_power(G.order(), ell))
        throw std::domain_error("check_G2: G must be an ell-group");
    if (G.order() < ell * ell) return true;  // hypothesis |H| >= ell^2 fails
    if (G.order() > (long)perm_group::kEnumCap)
        throw group_size_error("check_G2: order above enumeration bound");
    auto D = derived_subgroup(G);
    long q = G.order() / (long)D.size();  // abelianization order, an ell-power
    if (q < ell * ell) return false;      // any order-ell^2 quotient is abelian
    // brute-force subgroups of the abelianization with index ell^2:
    // realized as subgroups of G containing D
    std::set<std::vector<perm>> seen;
    std::vector<std::vector<perm>> stack;
    std::sort(D.begin(), D.end());
    stack.push_back(D);
    seen.insert(D);
    long target = G.order() / (ell * ell);
    while (!stack.empty()) {
        auto S = stack.back();
        stack.pop_back();
        if ((long)S.size() == target) return true;
        if ((long)S.size() > target) continue;
        for (const auto& x : G.elements()) {
            if (std::binary_search(S.begin(), S.end(), x)) continue;
            std::vector<perm> gens = S;
            gens.push_back(x);
            auto T = closure(gens, G.degree(), perm_group::kOrderCap);
            std::sort(T.begin(), T.end());
            if ((long)T.size() <= target && seen.insert(T).second) stack.push_back(T);
        }
    }
    return false;
}

// Divisors of `order` congruent to 1 mod ell: the admissible Sylow counts.
inline std::set<long> sylow_admissible_counts(long order, long ell) {
    if (order % ell != 0)
        throw std::domain_error("sylow_admissible_counts: ell must divide order");
    std::set<long> out;
    for (long m = 1; m <= order; ++m)
        if (order % m == 0 && m % ell == 1) out.insert(m);
    return out;
}

// Catalog of named groups from `name|degree|cycles;cycles` lines.
inline std::map<std::string, perm_group> load_group_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("group catalog: cannot open " + path);
    std::map<std::string, perm_group> catalog;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name, deg, gens;
        if (!std::getline(ls, name, '|') || !std::getline(ls, deg, '|') ||
            !std::getline(ls, gens))
            throw std::runtime_error("group catalog: bad line: " + line);
        int degree = std::stoi(deg);
        std::vector<perm> gen_perms;
        std::istringstream gs(gens);
        std::string one;
        while (std::getline(gs, one, ';')) gen_perms.push_back(perm_from_cycles(one, degree));
        catalog.emplace(name, perm_group(degree, std::move(gen_perms)));
    }
    return catalog;
}

}  // namespace abv
