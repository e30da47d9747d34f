#pragma once

// Exact rational arithmetic and formal products of rational powers.
// All accept/reject decisions elsewhere in the library go through
// pow_product::cmp; decimal rendering is presentation-only.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace abv {

using Int = mpz_class;
using Rat = mpq_class;

struct undefined_valuation_error : std::domain_error {
    undefined_valuation_error() : std::domain_error("valuation of zero is undefined") {}
};

inline Rat make_rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_from_string(const std::string& s) {
    // Accepts "a/b" or a decimal string like "6.93".
    auto dot = s.find('.');
    Rat r;
    if (dot == std::string::npos) {
        r = Rat(s);
    } else {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::string den = "1" + std::string(s.size() - dot - 1, '0');
        r = Rat(digits + "/" + den);
    }
    r.canonicalize();
    return r;
}

// Largest power of ell dividing n (n != 0); ell-adic valuation of an integer.
inline long int_valuation(Int n, const Int& ell) {
    if (n == 0) throw undefined_valuation_error();
    long v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), ell.get_mpz_t())) {
        n /= ell;
        ++v;
    }
    return v;
}

// ell-adic valuation of a nonzero rational.
inline long valuation(const Rat& x, const Int& ell) {
    if (x == 0) throw undefined_valuation_error();
    return int_valuation(x.get_num(), ell) - int_valuation(x.get_den(), ell);
}

inline long valuation(const Rat& x, long ell) { return valuation(x, Int(ell)); }

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// Trial-division factorization; adequate for the small numbers this
// library handles. Any cofactor beyond the bound is kept whole.
inline std::vector<std::pair<Int, long>> factor_int(Int n, unsigned long bound = 1000000) {
    if (n <= 0) throw std::domain_error("factor_int: argument must be positive");
    std::vector<std::pair<Int, long>> fs;
    for (Int p = 2; p * p <= n && p <= bound; p += (p == 2 ? 1 : 2)) {
        long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) fs.emplace_back(p, e);
    }
    if (n > 1) fs.emplace_back(n, 1);
    return fs;
}

enum class ordering { LESS, EQUAL, GREATER };

// Formal product prod base_i^{exp_i} with positive rational bases and
// rational exponents. Canonical form: bases factored into primes,
// sorted, merged, zero exponents dropped. Represents a positive real
// number exactly.
class pow_product {
public:
    pow_product() = default;

    static pow_product one() { return pow_product(); }

    static pow_product from_rational(const Rat& x) {
        return pow_product().mul_factor(x, Rat(1));
    }

    static pow_product power(const Rat& base, const Rat& exp) {
        return pow_product().mul_factor(base, exp);
    }

    // factors are (prime-or-cofactor base >= 2, exponent != 0), sorted by base
    const std::vector<std::pair<Int, Rat>>& factors() const { return factors_; }

    bool is_one() const { return factors_.empty(); }

    // True iff the represented value is rational (all exponents integral,
    // given prime-factored bases).
    bool is_rational() const {
        for (const auto& [b, e] : factors_)
            if (e.get_den() != 1) return false;
        return true;
    }

    Rat as_rational() const {
        if (!is_rational()) throw std::domain_error("pow_product: value is not rational");
        Rat r(1);
        for (const auto& [b, e] : factors_) {
            Int num = e.get_num();
            if (num >= 0)
                r *= Rat(int_pow(b, num.get_ui()));
            else
                r /= Rat(int_pow(b, Int(-num).get_ui()));
        }
        return r;
    }

    pow_product& operator*=(const pow_product& o) {
        for (const auto& [b, e] : o.factors_) add_prime_factor(b, e);
        normalize();
        return *this;
    }

    friend pow_product operator*(pow_product a, const pow_product& b) { return a *= b; }

    pow_product pow(const Rat& e) const {
        pow_product r;
        if (e == 0) return r;
        for (const auto& [b, x] : factors_) r.add_prime_factor(b, x * e);
        r.normalize();
        return r;
    }

    pow_product inverse() const { return pow(Rat(-1)); }

    bool operator==(const pow_product& o) const { return cmp(*this, o) == ordering::EQUAL; }

    // Exact comparison of the represented real values: clear exponent
    // denominators by raising both sides to their lcm, then compare
    // big-integer products. No floating point.
    static ordering cmp(const pow_product& x, const pow_product& y) {
        pow_product z = x * y.inverse();
        if (z.factors_.empty()) return ordering::EQUAL;
        Int L = 1;
        for (const auto& [b, e] : z.factors_)
            mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), e.get_den().get_mpz_t());
        Int pos = 1, neg = 1;
        for (const auto& [b, e] : z.factors_) {
            Int k = e.get_num() * (L / e.get_den());
            if (k > 0)
                pos *= int_pow(b, k.get_ui());
            else
                neg *= int_pow(b, Int(-k).get_ui());
        }
        int c = cmp_int(pos, neg);
        return c < 0 ? ordering::LESS : c > 0 ? ordering::GREATER : ordering::EQUAL;
    }

    static ordering cmp(const pow_product& x, const Rat& y) {
        if (y <= 0) return ordering::GREATER;  // values are always positive
        return cmp(x, from_rational(y));
    }

    bool less_than(const pow_product& o) const { return cmp(*this, o) == ordering::LESS; }
    bool less_than(const Rat& o) const { return cmp(*this, o) == ordering::LESS; }
    bool less_eq(const Rat& o) const { return cmp(*this, o) != ordering::GREATER; }

    // Rational enclosure lo <= value <= hi with hi - lo <= width.
    std::pair<Rat, Rat> enclosure(const Rat& width) const {
        long k = 1;
        while (true) {
            auto [lo, hi] = enclosure_at_scale(k);
            if (hi - lo <= width) return {lo, hi};
            k *= 2;
        }
    }

    // Correctly rounded decimal string with `digits` fractional digits
    // (round half away from zero on exact ties, which only occur for
    // rational values and are detected exactly).
    std::string decimal(long digits) const {
        if (digits < 1) throw std::domain_error("decimal: digits must be >= 1");
        Int S = int_pow(Int(10), digits);
        Int n;
        if (is_rational()) {
            Rat scaled = as_rational() * Rat(S) + Rat(1, 2);
            // round half up: floor(v*S + 1/2), exact tie goes up
            mpz_fdiv_q(n.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
            if (scaled == Rat(n))  // hit the boundary exactly: v*S + 1/2 integral
                ;                  // floor already rounds the tie upward
        } else {
            long k = digits + 4;
            while (true) {
                auto [lo, hi] = enclosure_at_scale(k);
                Int nlo = rat_floor(lo * Rat(S) + Rat(1, 2));
                Int nhi = rat_floor(hi * Rat(S) + Rat(1, 2));
                if (nlo == nhi) {
                    n = nlo;
                    break;
                }
                k *= 2;
            }
        }
        Int ip = n / S, fp = n % S;
        std::string frac = fp.get_str();
        frac.insert(frac.begin(), digits - (long)frac.size(), '0');
        return ip.get_str() + "." + frac;
    }

    std::string str() const {
        if (factors_.empty()) return "1";
        std::ostringstream os;
        bool first = true;
        for (const auto& [b, e] : factors_) {
            if (!first) os << "*";
            first = false;
            os << b.get_str();
            if (e != 1) {
                os << "^";
                if (e.get_den() == 1)
                    os << e.get_num().get_str();
                else
                    os << "(" << e.get_num().get_str() << "/" << e.get_den().get_str() << ")";
            }
        }
        return os.str();
    }

private:
    std::vector<std::pair<Int, Rat>> factors_;

    static int cmp_int(const Int& a, const Int& b) { return mpz_cmp(a.get_mpz_t(), b.get_mpz_t()); }

    static Int rat_floor(const Rat& r) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
        return q;
    }

    pow_product& mul_factor(const Rat& base, const Rat& exp) {
        if (base <= 0) throw std::domain_error("pow_product: base must be positive");
        if (exp != 0) {
            for (const auto& [p, e] : factor_int(base.get_num())) add_prime_factor(p, exp * e);
            for (const auto& [p, e] : factor_int(base.get_den())) add_prime_factor(p, -exp * e);
        }
        normalize();
        return *this;
    }

    void add_prime_factor(const Int& p, const Rat& exp) {
        if (p == 1) return;
        factors_.emplace_back(p, exp);
    }

    void normalize() {
        std::map<Int, Rat> merged;
        for (auto& [b, e] : factors_) merged[b] += e;
        factors_.clear();
        for (auto& [b, e] : merged)
            if (e != 0) factors_.emplace_back(b, e);
    }

    // Enclosure with per-factor root error 10^-k: [lo, hi], lo <= v <= hi.
    std::pair<Rat, Rat> enclosure_at_scale(long k) const {
        Int S = int_pow(Int(10), k);
        Rat lo(1), hi(1);
        for (const auto& [b, e] : factors_) {
            Int p = e.get_num();
            Int q = e.get_den();
            bool invert = p < 0;
            Int pa = invert ? Int(-p) : p;
            // r = b^{pa/q}: integer q-th root enclosure of b^pa * S^q
            Int t = int_pow(b, pa.get_ui()) * int_pow(S, q.get_ui());
            Int root;
            mpz_root(root.get_mpz_t(), t.get_mpz_t(), q.get_ui());
            Rat flo = Rat(root) / Rat(S);
            Rat fhi = Rat(root + 1) / Rat(S);
            if (invert) {
                lo *= 1 / fhi;
                hi *= 1 / flo;
            } else {
                lo *= flo;
                hi *= fhi;
            }
        }
        return {lo, hi};
    }
};

inline ordering powprod_cmp(const pow_product& x, const pow_product& y) {
    return pow_product::cmp(x, y);
}

inline ordering powprod_cmp(const pow_product& x, const Rat& y) { return pow_product::cmp(x, y); }

inline std::string powprod_decimal(const pow_product& x, long digits) { return x.decimal(digits); }

}  // namespace abv
