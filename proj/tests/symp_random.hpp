#pragma once

// Seeded random symplectic ell-subgroups for fixed-point tests: the
// Siegel unipotent generators conjugated by a random product of
// symplectic transvections.

#include <abv/symplectic.hpp>

#include <random>

namespace abv::testutil {

// transvection x -> x + c * <x, v> * v; preserves any alternating form
inline fp_matrix transvection(const symp_space& V, const std::vector<long>& v, long c) {
    long p = V.p(), d = V.dim();
    auto T = fp_matrix::identity(p, d);
    // row vector w_j = <e_j, v> = sum_k J[j][k] v[k]; T = I + c v w^T ... careful
    // with orientation: (Tx)_i = x_i + c * v_i * <v, x>? use <x, v> convention.
    std::vector<long> w(d, 0);
    for (long j = 0; j < d; ++j) {
        long s = 0;
        for (long k = 0; k < d; ++k) s = (s + V.form().m[j][k] * v[k]) % p;
        w[j] = s;  // <e_j, v>
    }
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) T.m[i][j] = (T.m[i][j] + c * v[i] % p * w[j]) % p;
    return T;
}

inline fp_matrix random_symplectic(const symp_space& V, std::mt19937& rng, int factors = 6) {
    long p = V.p(), d = V.dim();
    auto g = fp_matrix::identity(p, d);
    std::uniform_int_distribution<long> coeff(1, p - 1), entry(0, p - 1);
    for (int f = 0; f < factors; ++f) {
        std::vector<long> v(d, 0);
        bool nonzero = false;
        while (!nonzero) {
            for (auto& x : v) {
                x = entry(rng);
                nonzero |= (x != 0);
            }
        }
        g = transvection(V, v, coeff(rng)).mul(g);
    }
    return g;
}

// Generators of a random ell-subgroup: a nonempty random subset of the
// Siegel unipotents [[I, E],[0, I]] (E symmetric elementary), conjugated
// by a random symplectic matrix. Requires the standard block form.
inline std::vector<fp_matrix> random_ell_subgroup(const symp_space& V, std::mt19937& rng) {
    long p = V.p(), n = V.n(), d = V.dim();
    std::vector<fp_matrix> siegel;
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j) {
            auto U = fp_matrix::identity(p, d);
            U.m[i][n + j] = 1;
            U.m[j][n + i] = 1;
            siegel.push_back(U);
        }
    std::uniform_int_distribution<int> pick(0, 1);
    std::vector<fp_matrix> chosen;
    while (chosen.empty())
        for (const auto& U : siegel)
            if (pick(rng)) chosen.push_back(U);
    auto g = random_symplectic(V, rng);
    // inverse of g via Gauss-Jordan on [g | I]
    fp_matrix aug = fp_matrix::zero(p, d, 2 * d);
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) aug.m[i][j] = g.m[i][j];
        aug.m[i][d + i] = 1;
    }
    rref(aug);
    fp_matrix ginv = fp_matrix::zero(p, d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) ginv.m[i][j] = aug.m[i][d + j];
    std::vector<fp_matrix> out;
    for (const auto& U : chosen) out.push_back(g.mul(U).mul(ginv));
    return out;
}

}  // namespace abv::testutil
