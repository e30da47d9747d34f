#pragma once

// Synthetic semistable Tate modules: lattices with a unipotent inertia
// generator, effective stage, component-group valuation, isogeny and
// kernel calculus, and isogeny towers.

#include <abv/exactnum.hpp>
#include <abv/symplectic.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace abv {

struct kernel_stability_error : std::runtime_error {
    explicit kernel_stability_error(const std::string& m) : std::runtime_error(m) {}
};

// ---------------------------------------------------------------- exact
// rational matrices (small, dense)

using qmat = std::vector<std::vector<Rat>>;

inline qmat qmat_zero(long r, long c) { return qmat(r, std::vector<Rat>(c, Rat(0))); }

inline qmat qmat_identity(long n) {
    auto I = qmat_zero(n, n);
    for (long i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline qmat qmat_mul(const qmat& A, const qmat& B) {
    long r = (long)A.size(), m = (long)B.size(), c = (long)B[0].size();
    auto R = qmat_zero(r, c);
    for (long i = 0; i < r; ++i)
        for (long k = 0; k < m; ++k) {
            if (A[i][k] == 0) continue;
            for (long j = 0; j < c; ++j) R[i][j] += A[i][k] * B[k][j];
        }
    return R;
}

inline Rat qmat_det(qmat A) {
    long n = (long)A.size();
    Rat det = 1;
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det = -det;
        }
        det *= A[col][col];
        for (long r = col + 1; r < n; ++r) {
            if (A[r][col] == 0) continue;
            Rat f = A[r][col] / A[col][col];
            for (long j = col; j < n; ++j) A[r][j] -= f * A[col][j];
        }
    }
    return det;
}

inline qmat qmat_inverse(qmat A) {
    long n = (long)A.size();
    auto I = qmat_identity(n);
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::domain_error("qmat_inverse: singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        Rat d = A[col][col];
        for (long j = 0; j < n; ++j) {
            A[col][j] /= d;
            I[col][j] /= d;
        }
        for (long r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (long j = 0; j < n; ++j) {
                A[r][j] -= f * A[col][j];
                I[r][j] -= f * I[col][j];
            }
        }
    }
    return I;
}

inline bool qmat_is_integral(const qmat& A) {
    for (const auto& row : A)
        for (const auto& x : row)
            if (x.get_den() != 1) return false;
    return true;
}

// ------------------------------------------------------------ lattices

// Column Hermite normal form of an integer matrix whose columns generate
// a full-rank lattice in Z^n: upper triangular, positive diagonal,
// entries right of the diagonal reduced into [0, diagonal).
inline std::vector<std::vector<Int>> hermite_upper(std::vector<std::vector<Int>> M) {
    long n = (long)M.size(), m = (long)M[0].size();
    long active = m;  // columns [0, active) still in play
    for (long row = n - 1; row >= 0; --row) {
        // gcd-eliminate row `row` among active columns, leaving one pivot
        long target = active - 1;
        while (true) {
            long nonzero = -1;
            for (long j = 0; j < target; ++j)
                if (M[row][j] != 0) {
                    nonzero = j;
                    break;
                }
            if (M[row][target] == 0) {
                if (nonzero < 0) throw std::domain_error("hermite_upper: rank deficient");
                for (long i = 0; i < n; ++i) std::swap(M[i][target], M[i][nonzero]);
                continue;
            }
            if (nonzero < 0) break;
            // reduce the pair (col nonzero, col target) by the Euclid step
            if (abs(M[row][nonzero]) < abs(M[row][target]))
                for (long i = 0; i < n; ++i) std::swap(M[i][target], M[i][nonzero]);
            Int q = M[row][nonzero] / M[row][target];  // truncated division
            for (long i = 0; i < n; ++i) M[i][nonzero] -= q * M[i][target];
        }
        if (M[row][target] < 0)
            for (long i = 0; i < n; ++i) M[i][target] = -M[i][target];
        active = target;
    }
    // pivot for row i now sits in column (m - n) + i; reduce to the right
    std::vector<std::vector<Int>> H(n, std::vector<Int>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) H[i][j] = M[i][(m - n) + j];
    for (long i = n - 1; i >= 0; --i)
        for (long j = i + 1; j < n; ++j) {
            Int q = H[i][j] / H[i][i];
            if (H[i][j] - q * H[i][i] < 0) q -= 1;
            if (q == 0) continue;
            for (long k = 0; k <= i; ++k) H[k][j] -= q * H[k][i];
        }
    return H;
}

// Canonical basis of the lattice generated by the columns of G (entries
// rational with ell-power denominators): scale to integers, HNF, rescale.
inline qmat canonical_lattice(const qmat& G, long ell) {
    long n = (long)G.size();
    long e = 0;
    for (const auto& row : G)
        for (const auto& x : row) {
            Int den = x.get_den();
            long v = den == 1 ? 0 : int_valuation(den, ell);
            if (int_pow(Int(ell), (unsigned long)v) != den)
                throw std::domain_error("lattice entries must have ell-power denominators");
            e = std::max(e, v);
        }
    Int scale = int_pow(Int(ell), (unsigned long)e);
    std::vector<std::vector<Int>> M(n, std::vector<Int>((long)G[0].size()));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < (long)G[0].size(); ++j) {
            Rat s = G[i][j] * scale;
            M[i][j] = s.get_num();
        }
    auto H = hermite_upper(std::move(M));
    qmat out = qmat_zero(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) out[i][j] = Rat(H[i][j]) / scale;
    return out;
}

// ------------------------------------------------------- inertia module

// A kernel is a subspace of T/ellT written in the canonical
// lattice-adapted coordinates.
struct tate_kernel {
    subspace space;
};

class inertia_module {
public:
    inertia_module(long ell, long t, long a, std::vector<std::vector<Int>> N,
                   qmat lattice = {})
        : ell_(ell), t_(t), a_(a), N_(std::move(N)) {
        if (t_ < 1) throw std::domain_error("inertia_module: toric rank t >= 1 required");
        if (a_ < 0) throw std::domain_error("inertia_module: abelian rank a >= 0 required");
        if ((long)N_.size() != t_) throw std::domain_error("inertia_module: N must be t x t");
        for (const auto& row : N_)
            if ((long)row.size() != t_) throw std::domain_error("inertia_module: N must be t x t");
        for (long i = 0; i < t_; ++i)
            for (long j = 0; j < t_; ++j)
                if (N_[i][j] != N_[j][i])
                    throw std::domain_error("inertia_module: N must be symmetric");
        if (lattice.empty()) lattice = qmat_identity(dim());
        lattice_ = canonical_lattice(lattice, ell_);
        // det(N) != 0
        qmat nq = qmat_zero(t_, t_);
        for (long i = 0; i < t_; ++i)
            for (long j = 0; j < t_; ++j) nq[i][j] = Rat(N_[i][j]);
        if (qmat_det(nq) == 0) throw std::domain_error("inertia_module: det(N) must be nonzero");
        // sigma maps the lattice into itself
        adapted_ = qmat_mul(qmat_inverse(lattice_), qmat_mul(sigma(), lattice_));
        if (!qmat_is_integral(adapted_))
            throw std::domain_error("inertia_module: sigma does not stabilize the lattice");
        // the adapted generator is again block unipotent with top-right block
        for (long i = 0; i < dim(); ++i)
            for (long j = 0; j < dim(); ++j) {
                Rat expect = (i == j) ? Rat(1) : Rat(0);
                if (i < t_ && j >= t_ + 2 * a_) continue;  // the N' block
                if (adapted_[i][j] != expect)
                    throw std::logic_error("inertia_module: adapted generator not block unipotent");
            }
    }

    long ell() const { return ell_; }
    long t() const { return t_; }
    long a() const { return a_; }
    long d() const { return t_ + a_; }
    long dim() const { return 2 * (t_ + a_); }
    const std::vector<std::vector<Int>>& ambient_N() const { return N_; }
    const qmat& lattice() const { return lattice_; }

    // ambient alternating form: coordinates i and t+2a+i pair to 1 for
    // i < t, standard symplectic block on the middle 2a coordinates
    qmat form() const {
        auto J = qmat_zero(dim(), dim());
        for (long i = 0; i < t_; ++i) {
            J[i][t_ + 2 * a_ + i] = 1;
            J[t_ + 2 * a_ + i][i] = -1;
        }
        for (long j = 0; j < a_; ++j) {
            J[t_ + j][t_ + a_ + j] = 1;
            J[t_ + a_ + j][t_ + j] = -1;
        }
        return J;
    }

    // ambient inertia generator [[1,0,N],[0,1,0],[0,0,1]]
    qmat sigma() const {
        auto S = qmat_identity(dim());
        for (long i = 0; i < t_; ++i)
            for (long j = 0; j < t_; ++j) S[i][t_ + 2 * a_ + j] = Rat(N_[i][j]);
        return S;
    }

    // sigma in the canonical lattice-adapted basis (integral)
    const qmat& adapted_sigma() const { return adapted_; }

    // top-right t x t block of the adapted generator minus identity
    std::vector<std::vector<Int>> adapted_N() const {
        std::vector<std::vector<Int>> out(t_, std::vector<Int>(t_));
        for (long i = 0; i < t_; ++i)
            for (long j = 0; j < t_; ++j) out[i][j] = adapted_[i][t_ + 2 * a_ + j].get_num();
        return out;
    }

    // exponent s with ell^s * (pairing on the lattice) integral and sharp
    long form_scale() const {
        qmat gram = qmat_mul(qmat_mul(transpose(lattice_), form()), lattice_);
        long minval = 0;
        for (const auto& row : gram)
            for (const auto& x : row)
                if (x != 0) minval = std::min(minval, valuation(x, ell_));
        return -minval;
    }

    static qmat transpose(const qmat& A) {
        auto R = qmat_zero((long)A[0].size(), (long)A.size());
        for (size_t i = 0; i < A.size(); ++i)
            for (size_t j = 0; j < A[0].size(); ++j) R[j][i] = A[i][j];
        return R;
    }

    bool operator==(const inertia_module& o) const {
        return ell_ == o.ell_ && t_ == o.t_ && a_ == o.a_ && N_ == o.N_ &&
               lattice_ == o.lattice_;
    }

private:
    long ell_, t_, a_;
    std::vector<std::vector<Int>> N_;
    qmat lattice_;
    qmat adapted_;
};

// 1 + minimal ell-adic valuation over the adapted monodromy block
inline long effective_stage(const inertia_module& M) {
    long best = -1;
    for (const auto& row : M.adapted_N())
        for (const auto& x : row) {
            if (x == 0) continue;
            long v = int_valuation(x, M.ell());
            if (best < 0 || v < best) best = v;
        }
    if (best < 0) throw std::logic_error("effective_stage: zero monodromy block");
    return 1 + best;
}

// ell-adic valuation of det of the adapted monodromy block
inline long component_order(const inertia_module& M) {
    auto N = M.adapted_N();
    qmat nq = qmat_zero(M.t(), M.t());
    for (long i = 0; i < M.t(); ++i)
        for (long j = 0; j < M.t(); ++j) nq[i][j] = Rat(N[i][j]);
    Rat det = qmat_det(nq);
    return valuation(det, M.ell());
}

// projections of M1 (first t+2a adapted coordinates) and M2 (first t)
// to T/ellT
inline std::pair<subspace, subspace> reduced_flags(const inertia_module& M) {
    long p = M.ell(), n = M.dim();
    std::vector<std::vector<long>> m1, m2;
    for (long i = 0; i < M.t() + 2 * M.a(); ++i) {
        std::vector<long> e(n, 0);
        e[i] = 1;
        m1.push_back(e);
        if (i < M.t()) m2.push_back(e);
    }
    return {subspace(p, n, m1), subspace(p, n, m2)};
}

// reduction of the adapted generator mod ell
inline fp_matrix reduced_sigma(const inertia_module& M) {
    long p = M.ell(), n = M.dim();
    fp_matrix out = fp_matrix::zero(p, n, n);
    const auto& A = M.adapted_sigma();
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            Int r = A[i][j].get_num() % p;
            if (r < 0) r += p;
            out.m[i][j] = (long)r.get_si();
        }
    return out;
}

inline bool kernel_is_stable(const inertia_module& M, const tate_kernel& k) {
    return k.space.apply(reduced_sigma(M)) == k.space;
}

// lattice enlargement T' = T + (1/ell) * lifts of the kernel
inline inertia_module isogeny(const inertia_module& M, const tate_kernel& k) {
    long ell = M.ell(), n = M.dim();
    if (k.space.dim() == 0) return M;  // trivial kernel: identity isogeny
    if (k.space.dim() == n)
        throw std::domain_error("isogeny: kernel must be a proper subspace");
    if (!kernel_is_stable(M, k))
        throw kernel_stability_error("isogeny: kernel is not stable under the inertia action");
    qmat gens = qmat_zero(n, n + k.space.dim());
    for (long i = 0; i < n; ++i) gens[i][i] = 1;
    for (long j = 0; j < k.space.dim(); ++j)
        for (long i = 0; i < n; ++i)
            gens[i][n + j] = Rat(k.space.basis()[j][i]) / ell;
    qmat rel = canonical_lattice(gens, ell);  // new basis in old adapted coords
    return inertia_module(ell, M.t(), M.a(), M.ambient_N(), qmat_mul(M.lattice(), rel));
}

struct lemma24_report {
    long lhs = 0, rhs = 0;
    bool holds = false;
};

// ord(Phi') + dim kappa/(kappa cap M1bar) = ord(Phi) + dim(kappa cap M2bar)
inline lemma24_report verify_lemma24(const inertia_module& M, const tate_kernel& k) {
    auto M2 = isogeny(M, k);
    auto [m1, m2bar] = reduced_flags(M);
    lemma24_report r;
    r.lhs = component_order(M2) + (k.space.dim() - k.space.intersect(m1).dim());
    r.rhs = component_order(M) + k.space.intersect(m2bar).dim();
    r.holds = (r.lhs == r.rhs);
    return r;
}

// the commuting square: phi'_* N'_sigma phi_* = ell N_sigma, with both
// induced maps injective
inline bool diagram_check(const inertia_module& M, const tate_kernel& k) {
    auto M2 = isogeny(M, k);
    long ell = M.ell(), t = M.t(), off = M.t() + 2 * M.a();
    qmat R = qmat_mul(qmat_inverse(M.lattice()), M2.lattice());
    qmat Rinv = qmat_inverse(R);
    if (!qmat_is_integral(Rinv)) throw std::logic_error("diagram_check: T not inside T'");
    // phi_*: T/M1 -> T'/M1', the bottom-right block of R^{-1}
    qmat P = qmat_zero(t, t);
    for (long i = 0; i < t; ++i)
        for (long j = 0; j < t; ++j) P[i][j] = Rinv[off + i][off + j];
    // phi'_*: M2' -> M2, multiplication by ell on the first t columns
    qmat Q = qmat_zero(t, t);
    for (long i = 0; i < t; ++i)
        for (long j = 0; j < t; ++j) Q[i][j] = ell * R[i][j];
    if (!qmat_is_integral(Q)) throw std::logic_error("diagram_check: phi'_* not integral");
    if (qmat_det(P) == 0 || qmat_det(Q) == 0) return false;  // injectivity
    qmat Nq = qmat_zero(t, t), N2q = qmat_zero(t, t);
    auto N = M.adapted_N();
    auto N2 = M2.adapted_N();
    for (long i = 0; i < t; ++i)
        for (long j = 0; j < t; ++j) {
            Nq[i][j] = Rat(N[i][j]);
            N2q[i][j] = Rat(N2[i][j]);
        }
    qmat lhs = qmat_mul(Q, qmat_mul(N2q, P));
    for (long i = 0; i < t; ++i)
        for (long j = 0; j < t; ++j)
            if (lhs[i][j] != ell * Nq[i][j]) return false;
    return true;
}

// the kernel complementary to k inside T'/ell T': the image of T
inline tate_kernel complementary_kernel(const inertia_module& M, const inertia_module& M2) {
    long ell = M.ell(), n = M.dim();
    qmat Rinv = qmat_inverse(qmat_mul(qmat_inverse(M.lattice()), M2.lattice()));
    std::vector<std::vector<long>> rows;
    for (long j = 0; j < n; ++j) {
        std::vector<long> v(n);
        for (long i = 0; i < n; ++i) {
            Int r = Rinv[i][j].get_num() % ell;
            if (r < 0) r += ell;
            v[i] = (long)r.get_si();
        }
        rows.push_back(v);
    }
    return {subspace(ell, n, rows)};
}

// --------------------------------------------------- kernel strategies

enum class kernel_strategy { FLAG_M2, FLAG_M1, LAGRANGIAN_TAU, LAGRANGIAN_2GROUP };

// the symplectic space M1bar/M2bar (middle 2a adapted coordinates) with
// the form induced by the scaled lattice pairing
inline symp_space middle_space(const inertia_module& M) {
    long ell = M.ell(), a = M.a();
    if (a == 0) throw std::domain_error("middle_space: a >= 1 required");
    qmat gram = qmat_mul(qmat_mul(inertia_module::transpose(M.lattice()), M.form()),
                         M.lattice());
    Int scale = int_pow(Int(ell), (unsigned long)M.form_scale());
    fp_matrix J = fp_matrix::zero(ell, 2 * a, 2 * a);
    for (long i = 0; i < 2 * a; ++i)
        for (long j = 0; j < 2 * a; ++j) {
            Rat x = gram[M.t() + i][M.t() + j] * scale;
            if (x.get_den() != 1) throw std::logic_error("middle_space: non-integral pairing");
            Int r = x.get_num() % ell;
            if (r < 0) r += ell;
            J.m[i][j] = (long)r.get_si();
        }
    return symp_space(ell, J);
}

// preimage in M1bar of a subspace of the middle quotient
inline tate_kernel lift_middle(const inertia_module& M, const subspace& W) {
    long ell = M.ell(), n = M.dim();
    std::vector<std::vector<long>> rows;
    for (long i = 0; i < M.t(); ++i) {
        std::vector<long> e(n, 0);
        e[i] = 1;
        rows.push_back(e);
    }
    for (const auto& w : W.basis()) {
        std::vector<long> v(n, 0);
        for (long j = 0; j < 2 * M.a(); ++j) v[M.t() + j] = w[j];
        rows.push_back(v);
    }
    return {subspace(ell, n, rows)};
}

inline tate_kernel choose_kernel(const inertia_module& M, kernel_strategy strategy,
                                 const fp_matrix* tau = nullptr,
                                 const std::vector<fp_matrix>* gens = nullptr) {
    auto [m1, m2] = reduced_flags(M);
    switch (strategy) {
        case kernel_strategy::FLAG_M2:
            return {m2};
        case kernel_strategy::FLAG_M1:
            return {m1};
        case kernel_strategy::LAGRANGIAN_TAU: {
            if (M.ell() == 2)
                throw std::domain_error("choose_kernel: LAGRANGIAN_TAU requires odd ell");
            if (!tau) throw std::domain_error("choose_kernel: tau required");
            auto V = middle_space(M);
            auto [plus, minus] = involution_eigen_lagrangians(V, *tau);
            return lift_middle(M, plus);
        }
        case kernel_strategy::LAGRANGIAN_2GROUP: {
            if (M.ell() != 2)
                throw std::domain_error("choose_kernel: LAGRANGIAN_2GROUP requires ell = 2");
            auto V = middle_space(M);
            auto W = stable_lagrangian(V, gens ? *gens : std::vector<fp_matrix>{});
            return lift_middle(M, W);
        }
    }
    throw std::logic_error("choose_kernel: unknown strategy");
}

// ------------------------------------------------------------- towers

struct tower_point {
    long stage;
    long comp_order;
};

struct tower_result {
    std::vector<tower_point> points;
    // the global hypothesis (one prime over p in the division field)
    // making kernels stable over Q is assumed, not verified locally
    bool assumed_global_stability = true;
    std::string assumption_citation =
        "kernel stability over the global field is assumed (one prime above p)";
};

inline tower_result tower(const inertia_module& M0, long steps, kernel_strategy strategy,
                          const fp_matrix* tau = nullptr,
                          const std::vector<fp_matrix>* gens = nullptr) {
    tower_result out;
    inertia_module M = M0;
    out.points.push_back({effective_stage(M), component_order(M)});
    for (long s = 0; s < steps; ++s) {
        auto k = choose_kernel(M, strategy, tau, gens);
        M = isogeny(M, k);
        out.points.push_back({effective_stage(M), component_order(M)});
    }
    return out;
}

// -------------------------------------------------------- serialization

inline void serialize(const inertia_module& M, std::ostream& os) {
    os << "inertia_module\n";
    os << "ell " << M.ell() << "\n";
    os << "t " << M.t() << "\n";
    os << "a " << M.a() << "\n";
    os << "form_scale " << M.form_scale() << "\n";
    os << "N\n";
    for (const auto& row : M.ambient_N()) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
        os << "\n";
    }
    os << "lattice\n";
    for (const auto& row : M.lattice()) {
        for (size_t j = 0; j < row.size(); ++j)
            os << (j ? " " : "") << row[j].get_num() << "/" << row[j].get_den();
        os << "\n";
    }
    os << "end\n";
}

inline inertia_module deserialize(std::istream& is) {
    std::string tok;
    is >> tok;
    if (tok != "inertia_module") throw std::runtime_error("deserialize: bad header");
    long ell = 0, t = 0, a = 0, fs = 0;
    is >> tok >> ell >> tok >> t >> tok >> a >> tok >> fs >> tok;
    if (tok != "N") throw std::runtime_error("deserialize: expected N");
    std::vector<std::vector<Int>> N(t, std::vector<Int>(t));
    for (long i = 0; i < t; ++i)
        for (long j = 0; j < t; ++j) {
            std::string s;
            is >> s;
            N[i][j] = Int(s);
        }
    is >> tok;
    if (tok != "lattice") throw std::runtime_error("deserialize: expected lattice");
    long n = 2 * (t + a);
    qmat L = qmat_zero(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            std::string s;
            is >> s;
            L[i][j] = Rat(s);
            L[i][j].canonicalize();
        }
    is >> tok;
    if (tok != "end") throw std::runtime_error("deserialize: expected end");
    inertia_module M(ell, t, a, std::move(N), std::move(L));
    if (M.form_scale() != fs) throw std::runtime_error("deserialize: form_scale mismatch");
    return M;
}

}  // namespace abv
