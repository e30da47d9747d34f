#pragma once

// Symplectic vector spaces over prime fields: Lagrangian enumeration and
// counting, stable Lagrangians under ell-group actions, and involution
// eigenspace Lagrangians.

#include <abv/exactnum.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

namespace abv {

struct enumeration_budget_error : std::runtime_error {
    explicit enumeration_budget_error(const std::string& m) : std::runtime_error(m) {}
};

// Matrix over the prime field F_p, entries in [0, p).
struct fp_matrix {
    long p;
    std::vector<std::vector<long>> m;  // rows

    long rows() const { return (long)m.size(); }
    long cols() const { return m.empty() ? 0 : (long)m[0].size(); }

    static fp_matrix zero(long p, long r, long c) {
        return {p, std::vector<std::vector<long>>(r, std::vector<long>(c, 0))};
    }
    static fp_matrix identity(long p, long n) {
        auto I = zero(p, n, n);
        for (long i = 0; i < n; ++i) I.m[i][i] = 1;
        return I;
    }

    fp_matrix mul(const fp_matrix& o) const {
        auto r = zero(p, rows(), o.cols());
        for (long i = 0; i < rows(); ++i)
            for (long k = 0; k < cols(); ++k) {
                if (m[i][k] == 0) continue;
                for (long j = 0; j < o.cols(); ++j)
                    r.m[i][j] = (r.m[i][j] + m[i][k] * o.m[k][j]) % p;
            }
        return r;
    }

    fp_matrix transpose() const {
        auto r = zero(p, cols(), rows());
        for (long i = 0; i < rows(); ++i)
            for (long j = 0; j < cols(); ++j) r.m[j][i] = m[i][j];
        return r;
    }

    bool operator==(const fp_matrix& o) const = default;
    auto operator<=>(const fp_matrix& o) const = default;
};

inline long fp_inv(long a, long p) {
    long r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

// Reduced row echelon form in place; returns rank.
inline long rref(fp_matrix& A) {
    long p = A.p, rank = 0;
    for (long col = 0; col < A.cols() && rank < A.rows(); ++col) {
        long pivot = -1;
        for (long r = rank; r < A.rows(); ++r)
            if (A.m[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(A.m[rank], A.m[pivot]);
        long inv = fp_inv(A.m[rank][col], p);
        for (auto& x : A.m[rank]) x = x * inv % p;
        for (long r = 0; r < A.rows(); ++r) {
            if (r == rank || A.m[r][col] == 0) continue;
            long f = A.m[r][col];
            for (long j = 0; j < A.cols(); ++j)
                A.m[r][j] = ((A.m[r][j] - f * A.m[rank][j]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

// Subspace of F_p^n in canonical (RREF, zero rows dropped) form.
class subspace {
public:
    subspace(long p, long ambient_dim, std::vector<std::vector<long>> basis)
        : p_(p), n_(ambient_dim) {
        fp_matrix A{p, std::move(basis)};
        for (auto& row : A.m)
            for (auto& x : row) x = ((x % p) + p) % p;
        long rank = A.m.empty() ? 0 : rref(A);
        A.m.resize(rank);
        rows_ = std::move(A.m);
    }

    static subspace zero(long p, long n) { return subspace(p, n, {}); }

    long p() const { return p_; }
    long ambient_dim() const { return n_; }
    long dim() const { return (long)rows_.size(); }
    const std::vector<std::vector<long>>& basis() const { return rows_; }

    bool contains(const std::vector<long>& v) const {
        std::vector<std::vector<long>> rows = rows_;
        rows.push_back(v);
        return subspace(p_, n_, rows).dim() == dim();
    }

    bool contains(const subspace& o) const {
        for (const auto& r : o.rows_)
            if (!contains(r)) return false;
        return true;
    }

    subspace sum(const subspace& o) const {
        auto rows = rows_;
        for (const auto& r : o.rows_) rows.push_back(r);
        return subspace(p_, n_, rows);
    }

    subspace intersect(const subspace& o) const {
        // rowspace(A) ∩ rowspace(B) via the kernel of [A^T | -B^T]-style
        // coefficient matching: solve x A = y B
        long da = dim(), db = o.dim();
        if (da == 0 || db == 0) return zero(p_, n_);
        fp_matrix M = fp_matrix::zero(p_, n_, da + db);
        for (long j = 0; j < da; ++j)
            for (long i = 0; i < n_; ++i) M.m[i][j] = rows_[j][i];
        for (long j = 0; j < db; ++j)
            for (long i = 0; i < n_; ++i) M.m[i][da + j] = (p_ - o.rows_[j][i]) % p_;
        auto ker = kernel_basis(M);
        std::vector<std::vector<long>> rows;
        for (const auto& k : ker) {
            std::vector<long> v(n_, 0);
            for (long j = 0; j < da; ++j)
                for (long i = 0; i < n_; ++i) v[i] = (v[i] + k[j] * rows_[j][i]) % p_;
            rows.push_back(v);
        }
        return subspace(p_, n_, rows);
    }

    // image under a linear map (matrix acting on column vectors)
    subspace apply(const fp_matrix& g) const {
        std::vector<std::vector<long>> rows;
        for (const auto& r : rows_) {
            std::vector<long> v(n_, 0);
            for (long i = 0; i < n_; ++i)
                for (long j = 0; j < n_; ++j) v[i] = (v[i] + g.m[i][j] * r[j]) % p_;
            rows.push_back(v);
        }
        return subspace(p_, n_, rows);
    }

    bool operator==(const subspace& o) const {
        return p_ == o.p_ && n_ == o.n_ && rows_ == o.rows_;
    }
    auto operator<=>(const subspace& o) const = default;

    // kernel of M (columns = unknowns), basis of solution space
    static std::vector<std::vector<long>> kernel_basis(fp_matrix M) {
        long p = M.p, n = M.cols();
        rref(M);
        std::vector<long> pivot_col;
        std::vector<bool> is_pivot(n, false);
        for (long r = 0; r < M.rows(); ++r) {
            long c = 0;
            while (c < n && M.m[r][c] == 0) ++c;
            if (c < n) {
                pivot_col.push_back(c);
                is_pivot[c] = true;
            }
        }
        std::vector<std::vector<long>> ker;
        for (long free = 0; free < n; ++free) {
            if (is_pivot[free]) continue;
            std::vector<long> v(n, 0);
            v[free] = 1;
            for (size_t r = 0; r < pivot_col.size(); ++r)
                v[pivot_col[r]] = (p - M.m[r][free]) % p;
            ker.push_back(v);
        }
        return ker;
    }

private:
    long p_;
    long n_;
    std::vector<std::vector<long>> rows_;
};

// Symplectic space: even-dimensional F_p-space with a nondegenerate
// alternating form.
class symp_space {
public:
    symp_space(long p, fp_matrix form) : p_(p), J_(std::move(form)) {
        if (J_.rows() != J_.cols() || J_.rows() % 2 != 0)
            throw std::domain_error("symp_space: form must be square of even size");
        for (long i = 0; i < J_.rows(); ++i) {
            if (J_.m[i][i] != 0) throw std::domain_error("symp_space: form must be alternating");
            for (long j = 0; j < J_.cols(); ++j)
                if ((J_.m[i][j] + J_.m[j][i]) % p != 0)
                    throw std::domain_error("symp_space: form must be skew-symmetric");
        }
        fp_matrix tmp = J_;
        if (rref(tmp) != J_.rows()) throw std::domain_error("symp_space: form is degenerate");
    }

    // block form: J = [[0, I], [-I, 0]]
    static symp_space standard(long p, long n) {
        auto J = fp_matrix::zero(p, 2 * n, 2 * n);
        for (long i = 0; i < n; ++i) {
            J.m[i][n + i] = 1;
            J.m[n + i][i] = p - 1;
        }
        return symp_space(p, J);
    }

    long p() const { return p_; }
    long dim() const { return J_.rows(); }
    long n() const { return dim() / 2; }
    const fp_matrix& form() const { return J_; }

    long pair(const std::vector<long>& v, const std::vector<long>& w) const {
        long s = 0;
        for (long i = 0; i < dim(); ++i) {
            if (v[i] == 0) continue;
            for (long j = 0; j < dim(); ++j) s = (s + v[i] * J_.m[i][j] % p_ * w[j]) % p_;
        }
        return s;
    }

    bool is_isotropic(const subspace& W) const {
        for (const auto& v : W.basis())
            for (const auto& w : W.basis())
                if (pair(v, w) != 0) return false;
        return true;
    }

    bool preserves_form(const fp_matrix& g) const { return g.transpose().mul(J_).mul(g) == J_; }

    bool inverts_form(const fp_matrix& g) const {
        fp_matrix neg = J_;
        for (auto& row : neg.m)
            for (auto& x : row) x = (p_ - x) % p_;
        return g.transpose().mul(J_).mul(g) == neg;
    }

private:
    long p_;
    fp_matrix J_;
};

// prod_{i=1..n} (1 + q^i), the number of maximal isotropic subspaces.
inline Int lagrangian_count_formula(long q, long n) {
    if (n < 1) throw std::domain_error("lagrangian_count_formula: n >= 1 required");
    Int total = 1, qi = 1;
    for (long i = 1; i <= n; ++i) {
        qi *= q;
        total *= (1 + qi);
    }
    return total;
}

namespace detail {

// Enumerate all dim-k subspaces of F_p^n in RREF form.
inline void enumerate_subspaces(long p, long n, long k,
                                const std::function<void(const subspace&)>& emit) {
    std::vector<long> pivots(k);
    std::function<void(long, long)> choose = [&](long idx, long start) {
        if (idx == k) {
            // free entries: row r, column c with c > pivots[r], c not a pivot
            std::vector<std::pair<long, long>> free_cells;
            for (long r = 0; r < k; ++r)
                for (long c = pivots[r] + 1; c < n; ++c)
                    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
                        free_cells.emplace_back(r, c);
            std::vector<std::vector<long>> rows(k, std::vector<long>(n, 0));
            for (long r = 0; r < k; ++r) rows[r][pivots[r]] = 1;
            std::function<void(size_t)> fill = [&](size_t cell) {
                if (cell == free_cells.size()) {
                    emit(subspace(p, n, rows));
                    return;
                }
                auto [r, c] = free_cells[cell];
                for (long v = 0; v < p; ++v) {
                    rows[r][c] = v;
                    fill(cell + 1);
                }
                rows[r][c] = 0;
            };
            fill(0);
            return;
        }
        for (long c = start; c < n; ++c) {
            pivots[idx] = c;
            choose(idx + 1, c + 1);
        }
    };
    choose(0, 0);
}

}  // namespace detail

// All maximal isotropic (dimension n) subspaces, canonical form, sorted.
inline std::vector<subspace> enumerate_lagrangians(const symp_space& V,
                                                   long budget = 1000000) {
    Int count = lagrangian_count_formula(V.p(), V.n());
    if (count > budget)
        throw enumeration_budget_error("enumerate_lagrangians: count " + count.get_str() +
                                       " exceeds budget");
    std::vector<subspace> out;
    detail::enumerate_subspaces(V.p(), V.dim(), V.n(), [&](const subspace& W) {
        if (V.is_isotropic(W)) out.push_back(W);
    });
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<fp_matrix> matrix_group_closure(const std::vector<fp_matrix>& gens, long p,
                                                   long dim, size_t cap = 100000) {
    std::set<fp_matrix> seen{fp_matrix::identity(p, dim)};
    std::vector<fp_matrix> frontier{fp_matrix::identity(p, dim)};
    while (!frontier.empty()) {
        std::vector<fp_matrix> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                fp_matrix y = g.mul(x);
                if (seen.insert(y).second) {
                    if (seen.size() > cap)
                        throw enumeration_budget_error("matrix group closure exceeds cap");
                    next.push_back(std::move(y));
                }
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

namespace detail {

// Constructive stable Lagrangian: peel off a common fixed vector and
// recurse on its perp modulo the vector.
inline subspace stable_lagrangian_refine(const symp_space& V,
                                         const std::vector<fp_matrix>& gens) {
    long p = V.p(), d = V.dim();
    if (d == 0) return subspace::zero(p, 0);
    // common fixed space: intersection of ker(g - 1)
    subspace fixed(p, d, fp_matrix::identity(p, d).m);
    for (const auto& g : gens) {
        fp_matrix gm1 = g;
        for (long i = 0; i < d; ++i) gm1.m[i][i] = (gm1.m[i][i] + p - 1) % p;
        // kernel of (g-1) acting on column vectors
        auto ker = subspace::kernel_basis(gm1);
        fixed = fixed.intersect(subspace(p, d, ker));
    }
    if (fixed.dim() == 0)
        throw std::logic_error("stable_lagrangian: no fixed vector (not an ell-group?)");
    std::vector<long> v = fixed.basis()[0];

    // v^perp: kernel of the functional x -> <v, Jx>
    fp_matrix functional = fp_matrix::zero(p, 1, d);
    for (long j = 0; j < d; ++j) {
        long s = 0;
        for (long i = 0; i < d; ++i) s = (s + v[i] * V.form().m[i][j]) % p;
        functional.m[0][j] = s;
    }
    auto perp_rows = subspace::kernel_basis(functional);
    subspace perp(p, d, perp_rows);  // contains v, dimension d-1

    // basis of perp starting with v
    std::vector<std::vector<long>> basis{v};
    for (const auto& r : perp.basis()) {
        auto test = basis;
        test.push_back(r);
        if (subspace(p, d, test).dim() > (long)basis.size()) basis.push_back(r);
    }
    // quotient U = perp / <v>, coordinates w.r.t. basis[1..]
    long ud = d - 2;
    // induced form on U
    auto JU = fp_matrix::zero(p, ud, ud);
    for (long i = 0; i < ud; ++i)
        for (long j = 0; j < ud; ++j) JU.m[i][j] = V.pair(basis[i + 1], basis[j + 1]);
    if (ud == 0) return subspace(p, d, {v});

    // express a vector of perp in the (v, basis[1..]) coordinates
    auto coords = [&](const std::vector<long>& w) {
        fp_matrix M = fp_matrix::zero(p, d, d - 1 + 1);
        for (long j = 0; j < d - 1; ++j)
            for (long i = 0; i < d; ++i) M.m[i][j] = basis[j][i];
        for (long i = 0; i < d; ++i) M.m[i][d - 1] = (p - w[i] % p) % p;
        auto ker = subspace::kernel_basis(M);
        for (const auto& k : ker)
            if (k[d - 1] != 0) {
                long inv = fp_inv(k[d - 1], p);
                std::vector<long> c(d - 1);
                for (long j = 0; j < d - 1; ++j) c[j] = k[j] * inv % p;
                return c;
            }
        throw std::logic_error("coords: vector not in span");
    };

    // induced generators on U
    std::vector<fp_matrix> ugens;
    for (const auto& g : gens) {
        fp_matrix gu = fp_matrix::zero(p, ud, ud);
        for (long j = 0; j < ud; ++j) {
            std::vector<long> img(d, 0);
            for (long i = 0; i < d; ++i)
                for (long k = 0; k < d; ++k) img[i] = (img[i] + g.m[i][k] * basis[j + 1][k]) % p;
            auto c = coords(img);  // c[0] is the v-component, dropped in U
            for (long i = 0; i < ud; ++i) gu.m[i][j] = c[i + 1];
        }
        ugens.push_back(gu);
    }
    subspace WU = stable_lagrangian_refine(symp_space(p, JU), ugens);
    // lift: span of v and lifts of WU basis
    std::vector<std::vector<long>> lifted{v};
    for (const auto& w : WU.basis()) {
        std::vector<long> lift(d, 0);
        for (long j = 0; j < ud; ++j)
            for (long i = 0; i < d; ++i) lift[i] = (lift[i] + w[j] * basis[j + 1][i]) % p;
        lifted.push_back(lift);
    }
    return subspace(p, d, lifted);
}

}  // namespace detail

// A Lagrangian subspace stable under the ell-group generated by `gens`
// (q = ell prime here). Verified stable before returning.
inline subspace stable_lagrangian(const symp_space& V, const std::vector<fp_matrix>& gens,
                                  long enum_budget = 10000) {
    for (const auto& g : gens)
        if (!V.preserves_form(g))
            throw std::domain_error("stable_lagrangian: generator is not symplectic");
    auto elements = matrix_group_closure(gens, V.p(), V.dim());
    Int order(static_cast<long>(elements.size()));
    Int rem = order;
    while (rem % V.p() == 0) rem /= V.p();
    if (rem != 1) throw std::domain_error("stable_lagrangian: group is not an ell-group");

    subspace W = [&] {
        if (lagrangian_count_formula(V.p(), V.n()) <= enum_budget) {
            // orbit decomposition: scan for a fixed point in canonical order
            for (const auto& L : enumerate_lagrangians(V)) {
                bool stable = true;
                for (const auto& g : gens)
                    if (L.apply(g) != L) {
                        stable = false;
                        break;
                    }
                if (stable) return L;
            }
            throw std::logic_error("stable_lagrangian: no fixed point found");
        }
        return detail::stable_lagrangian_refine(V, gens);
    }();

    for (const auto& g : gens)
        if (W.apply(g) != W) throw std::logic_error("stable_lagrangian: output not stable");
    if (W.dim() != V.n() || !V.is_isotropic(W))
        throw std::logic_error("stable_lagrangian: output not Lagrangian");
    return W;
}

// Eigenspace Lagrangians of a form-inverting involution (odd q): the +1
// and -1 eigenspaces, each maximal isotropic of dimension n.
inline std::pair<subspace, subspace> involution_eigen_lagrangians(const symp_space& V,
                                                                  const fp_matrix& tau) {
    long p = V.p(), d = V.dim();
    if (p == 2) throw std::domain_error("involution_eigen_lagrangians: q must be odd");
    if (tau.mul(tau) != fp_matrix::identity(p, d))
        throw std::domain_error("involution_eigen_lagrangians: tau is not an involution");
    if (!V.inverts_form(tau))
        throw std::domain_error("involution_eigen_lagrangians: tau must invert the form");
    auto eigenspace = [&](long sign) {
        fp_matrix M = tau;
        for (long i = 0; i < d; ++i) M.m[i][i] = (M.m[i][i] + p - sign) % p;  // tau - sign*I
        return subspace(p, d, subspace::kernel_basis(M));
    };
    subspace plus = eigenspace(1), minus = eigenspace(p - 1);
    if (plus.dim() != V.n() || minus.dim() != V.n())
        throw std::logic_error("involution eigenspaces have unexpected dimension");
    if (!V.is_isotropic(plus) || !V.is_isotropic(minus))
        throw std::logic_error("involution eigenspaces are not isotropic");
    return {plus, minus};
}

}  // namespace abv
