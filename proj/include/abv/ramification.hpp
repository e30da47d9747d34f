#pragma once

// Lower/upper ramification numbering, Herbrand functions, different and
// conductor formulas, and the local bounds on division-field differents
// with their cyclotomic comparisons.

#include <abv/exactnum.hpp>

#include <numeric>
#include <vector>

namespace abv {

// Orders g_0 >= g_1 >= ... >= g_m of the lower-numbering ramification
// groups, with implicit g_n = 1 for n > m. The unramified case is (1).
class filtration {
public:
    filtration(long residue_char, std::vector<long> orders)
        : p_(residue_char), orders_(std::move(orders)) {
        if (p_ < 2) throw std::domain_error("filtration: residue characteristic must be prime");
        if (orders_.empty()) orders_ = {1};
        for (size_t i = 0; i < orders_.size(); ++i) {
            if (orders_[i] < 1) throw std::domain_error("filtration: orders must be positive");
            if (i + 1 < orders_.size()) {
                if (orders_[i] < orders_[i + 1])
                    throw std::domain_error("filtration: orders must be non-increasing");
                if (i >= 1 && orders_[i] % orders_[i + 1] != 0)
                    throw std::domain_error("filtration: g_{i+1} must divide g_i for i >= 1");
            }
        }
        // wild inertia is a p-group
        long g1 = order_at(1);
        while (g1 % p_ == 0) g1 /= p_;
        if (g1 != 1) throw std::domain_error("filtration: g_1 must be a power of residue_char");
        while (orders_.size() > 1 && orders_.back() == 1) orders_.pop_back();
    }

    static filtration unramified(long residue_char = 2) { return {residue_char, {1}}; }
    static filtration tame_cyclic(long degree, long residue_char) {
        return {residue_char, {degree}};
    }

    long residue_char() const { return p_; }
    const std::vector<long>& orders() const { return orders_; }
    long order_at(size_t n) const { return n < orders_.size() ? orders_[n] : 1; }
    long g0() const { return orders_[0]; }
    bool is_unramified() const { return orders_[0] == 1; }

    // largest index with g_n > 1, or -1 when unramified
    long last_nontrivial() const {
        for (long n = (long)orders_.size() - 1; n >= 0; --n)
            if (orders_[n] > 1) return n;
        return -1;
    }

private:
    long p_;
    std::vector<long> orders_;
};

// phi(u) = (g_1 + ... + g_m + (u - m) g_{m+1}) / g_0 on [m, m+1].
inline Rat herbrand_phi(const filtration& f, const Rat& u) {
    if (u < 0) throw std::domain_error("herbrand_phi: u must be >= 0");
    Int m_z = u.get_num() / u.get_den();
    long m = m_z.get_si();
    long acc = 0;
    for (long i = 1; i <= m; ++i) acc += f.order_at(i);
    Rat val = Rat(acc) + (u - Rat(m)) * Rat(f.order_at(m + 1));
    return val / Rat(f.g0());
}

// Inverse of herbrand_phi: walk the piecewise-linear segments.
inline Rat herbrand_psi(const filtration& f, const Rat& v) {
    if (v < 0) throw std::domain_error("herbrand_psi: v must be >= 0");
    Rat phi_n(0);
    long n = 0;
    while (true) {
        long g = f.order_at(n + 1);
        Rat phi_next = phi_n + Rat(g) / Rat(f.g0());
        if (v <= phi_next || g == 1)
            return Rat(n) + (v - phi_n) * Rat(f.g0()) / Rat(g);
        phi_n = phi_next;
        ++n;
    }
}

// Breaks of the upper numbering: (phi(n), g_n) at each lower break n.
inline std::vector<std::pair<Rat, long>> upper_breaks(const filtration& f) {
    std::vector<std::pair<Rat, long>> out;
    long last = f.last_nontrivial();
    for (long n = 0; n <= last; ++n)
        if (f.order_at(n) > f.order_at(n + 1))
            out.emplace_back(herbrand_phi(f, Rat(n)), f.order_at(n));
    return out;
}

// Valuation of the different in the top field: sum (g_i - 1).
inline long different_valuation(const filtration& f) {
    long s = 0;
    for (long n = 0; f.order_at(n) > 1; ++n) s += f.order_at(n) - 1;
    return s;
}

// Per-prime contribution to the root discriminant exponent:
// different_valuation / g_0 (equals 1 - 1/e for tame cyclic degree e).
inline Rat root_disc_exponent(const filtration& f) {
    return Rat(different_valuation(f)) / Rat(f.g0());
}

// Threshold above which the upper ramification groups of a p^n-division
// field vanish: e_K (n + 1/(p-1)) - 1.
inline Rat fontaine_upper_bound(long e_K, long n, long p) {
    if (e_K < 1 || n < 1) throw std::domain_error("fontaine_upper_bound: e_K, n >= 1 required");
    return Rat(e_K) * (Rat(n) + Rat(1, p - 1)) - 1;
}

// Strict upper bound on v_p of the different of the p^n-division field:
// n + 1/(p-1).
inline Rat fontaine_different_bound(long n, long p) {
    if (n < 1) throw std::domain_error("fontaine_different_bound: n >= 1 required");
    return Rat(n) + Rat(1, p - 1);
}

// v_p of the different of the m-th cyclotomic layer over an unramified
// base: m - 1/(p-1). Requires p^m > 2 so the layer is nontrivial.
inline Rat cyclotomic_different(long p, long m) {
    if (m < 1 || (p == 2 && m == 1))
        throw std::domain_error("cyclotomic_different: requires p^m > 2");
    return Rat(m) - Rat(1, p - 1);
}

// Largest cyclotomic layer m whose different does not contradict the
// division-field different bound at level n: n for odd p, n+1 for p = 2.
// assume_l2_cap applies the p = 2 refinement (cap drops back to n when
// the second layer is known not to grow).
inline long cyclotomic_cap(long p, long n, bool assume_l2_cap = false) {
    if (n < 1) throw std::domain_error("cyclotomic_cap: n >= 1 required");
    long m = (p == 2) ? 2 : 1;
    long best = n;  // mu_{p^n} always lies in the p^n-division field
    Rat bound = fontaine_different_bound(n, p);
    for (; cyclotomic_different(p, m) < bound; ++m) best = std::max(best, m);
    if (p == 2 && assume_l2_cap && n >= 2) best = n;
    return best;
}

// Conductor exponent of an abelian extension: phi(c) + 1 at the largest
// lower break c with g_c > 1; 0 when unramified. Exact rational (integral
// by Hasse-Arf whenever the filtration is abelian-realizable).
inline Rat conductor_exponent(const filtration& f) {
    long c = f.last_nontrivial();
    if (c < 0) return Rat(0);
    return herbrand_phi(f, Rat(c)) + 1;
}

}  // namespace abv
