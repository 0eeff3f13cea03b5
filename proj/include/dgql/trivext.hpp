#pragma once

#include "dgql/barkoszul.hpp"
#include "dgql/frobenius.hpp"
#include "dgql/linalg.hpp"
#include "dgql/quiver.hpp"

namespace dgql {

// Radical-square-zero algebra of a tree quiver: basis {e_i} ∪ {β}, all
// length-2 products zero; optional grading e_i -> 0, arrows -> 1.
struct RadSquareZero {
    QuiverPtr q;
    Field field;

    static RadSquareZero make(QuiverPtr q, Field field) { return RadSquareZero{std::move(q), field}; }
    int r() const { return static_cast<int>(q->vertices.size()); }
    int m() const { return static_cast<int>(q->arrows.size()); }
};

// Dual bimodule D(R) with arrow actions rescaled by lambda, mu. Convention
// (a.f)(x) = f(xa), (f.a)(x) = f(ax) on the dual basis {e_j*} ∪ {β*}; then
//   α·β* = [α=β] λ(α) e_{s(α)}*,   β*·α = [α=β] μ(α) e_{t(α)}*,
//   e_u·β* = [u=t(β)] β*,          β*·e_u = [u=s(β)] β*,
//   e_u·e_j* = [u=j] e_j*,         e_j*·e_u = [u=j] e_j*,
// and arrows kill e_j*.
// Dual basis order: β*_0..β*_{m-1}, e*_0..e*_{r-1}.
class TwistedDual {
  public:
    RadSquareZero R;
    std::vector<Scalar> lambda, mu; // per arrow, nonzero
    bool tree_flagged = true;       // non-tree accepted for construction but flagged

    int dual_dim() const { return R.m() + R.r(); }
    int dual_estar(int i) const { return R.m() + i; }

    // left action of R basis element k (k < r: e_k; else arrow k - r)
    std::vector<std::pair<int, Scalar>> left_act(int k, int t) const {
        const GradedQuiver& q = *R.q;
        int r = R.r(), m = R.m();
        if (k < r) {
            if (t < m) return q.arrows[t].tgt == k ? one_term(t) : none();
            return (t - m) == k ? one_term(t) : none();
        }
        int a = k - r;
        if (t < m) return t == a ? std::vector{std::pair{dual_estar(q.arrows[a].src), lambda[a]}}
                                 : none();
        return none();
    }

    std::vector<std::pair<int, Scalar>> right_act(int t, int k) const {
        const GradedQuiver& q = *R.q;
        int r = R.r(), m = R.m();
        if (k < r) {
            if (t < m) return q.arrows[t].src == k ? one_term(t) : none();
            return (t - m) == k ? one_term(t) : none();
        }
        int a = k - r;
        if (t < m) return t == a ? std::vector{std::pair{dual_estar(q.arrows[a].tgt), mu[a]}}
                                 : none();
        return none();
    }

  private:
    std::vector<std::pair<int, Scalar>> one_term(int t) const {
        return {{t, Scalar::one(R.field)}};
    }
    static std::vector<std::pair<int, Scalar>> none() { return {}; }
};

namespace detail {

inline std::vector<std::pair<int, Scalar>> scale_combo(std::vector<std::pair<int, Scalar>> v,
                                                       const Scalar& c) {
    for (auto& [k, x] : v) x *= c;
    return v;
}

} // namespace detail

inline TwistedDual twisted_dual(const RadSquareZero& R, std::vector<Scalar> lambda,
                                std::vector<Scalar> mu) {
    if (lambda.size() != R.q->arrows.size() || mu.size() != R.q->arrows.size())
        throw PreconditionError("need one twist value per arrow");
    for (const auto& c : lambda)
        if (c.is_zero()) throw PreconditionError("zero twist value");
    for (const auto& c : mu)
        if (c.is_zero()) throw PreconditionError("zero twist value");
    TwistedDual M{R, std::move(lambda), std::move(mu), is_tree(*R.q)};

    // bimodule axioms, exhaustively on basis triples
    const int rm = R.r() + R.m();
    auto rprod = [&](int x, int y) -> std::vector<std::pair<int, Scalar>> { // product in R
        int r = R.r();
        const GradedQuiver& q = *R.q;
        if (x < r && y < r) return x == y ? std::vector{std::pair{x, Scalar::one(R.field)}}
                                          : std::vector<std::pair<int, Scalar>>{};
        if (x < r) return q.arrows[y - r].src == x
                              ? std::vector{std::pair{y, Scalar::one(R.field)}}
                              : std::vector<std::pair<int, Scalar>>{};
        if (y < r) return q.arrows[x - r].tgt == y
                              ? std::vector{std::pair{x, Scalar::one(R.field)}}
                              : std::vector<std::pair<int, Scalar>>{};
        return {}; // rad^2 = 0
    };
    auto eq = [&](std::map<int, Scalar> a, const std::vector<std::pair<int, Scalar>>& b) {
        for (const auto& [k, c] : b) {
            auto [it, fresh] = a.emplace(k, -c);
            if (!fresh) it->second -= c;
        }
        for (const auto& [k, c] : a)
            if (!c.is_zero()) return false;
        return true;
    };
    auto as_map = [](const std::vector<std::pair<int, Scalar>>& v) {
        std::map<int, Scalar> m;
        for (const auto& [k, c] : v) m.emplace(k, c);
        return m;
    };
    for (int x = 0; x < rm; ++x)
        for (int t = 0; t < M.dual_dim(); ++t)
            for (int y = 0; y < rm; ++y) {
                // (x.t).y == x.(t.y)
                std::map<int, Scalar> lhs;
                for (const auto& [t2, c] : M.left_act(x, t))
                    for (const auto& [t3, c2] : M.right_act(t2, y)) {
                        auto [it, fresh] = lhs.emplace(t3, c * c2);
                        if (!fresh) it->second += c * c2;
                    }
                std::vector<std::pair<int, Scalar>> rhs;
                for (const auto& [t2, c] : M.right_act(t, y))
                    for (const auto& [t3, c2] : M.left_act(x, t2)) rhs.emplace_back(t3, c * c2);
                if (!eq(lhs, rhs)) throw InternalError("bimodule axiom (xm)y = x(my) fails");
                // (xy).t == x.(y.t)
                std::map<int, Scalar> l2;
                for (const auto& [z, c] : rprod(x, y))
                    for (const auto& [t2, c2] : M.left_act(z, t)) {
                        auto [it, fresh] = l2.emplace(t2, c * c2);
                        if (!fresh) it->second += c * c2;
                    }
                std::vector<std::pair<int, Scalar>> r2;
                for (const auto& [t2, c] : M.left_act(y, t))
                    for (const auto& [t3, c2] : M.left_act(x, t2)) r2.emplace_back(t3, c * c2);
                if (!eq(l2, r2)) throw InternalError("bimodule axiom (xy)m = x(ym) fails");
                // t.(xy) == (t.x).y
                std::map<int, Scalar> l3;
                for (const auto& [z, c] : rprod(x, y))
                    for (const auto& [t2, c2] : M.right_act(t, z)) {
                        auto [it, fresh] = l3.emplace(t2, c * c2);
                        if (!fresh) it->second += c * c2;
                    }
                std::vector<std::pair<int, Scalar>> r3;
                for (const auto& [t2, c] : M.right_act(t, x))
                    for (const auto& [t3, c2] : M.right_act(t2, y)) r3.emplace_back(t3, c * c2);
                if (!eq(l3, r3)) throw InternalError("bimodule axiom m(xy) = (mx)y fails");
                (void)as_map;
            }
    return M;
}

// Trivial extension R ⊕ ^λD(R)^μ with (a,m)(a',m') = (aa', am' + ma').
// Basis order: e_i | β | β* | e_i*; grading 0 | 1 | d | d+1.
struct TrivialExtension {
    QuiverPtr q;
    Field field;
    int d = 2;
    std::vector<Scalar> lambda, mu;
    std::vector<int> degrees;                 // per basis element (overridable for checks)
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> blocks;  // (srcIdem, tgtIdem)
    std::vector<std::vector<std::vector<std::pair<int, Scalar>>>> mult;

    int r() const { return static_cast<int>(q->vertices.size()); }
    int m() const { return static_cast<int>(q->arrows.size()); }
    int dim() const { return 2 * (r() + m()); }
    int idx_e(int i) const { return i; }
    int idx_beta(int j) const { return r() + j; }
    int idx_betastar(int j) const { return r() + m() + j; }
    int idx_estar(int i) const { return r() + 2 * m() + i; }

    std::vector<Scalar> one_vector() const {
        std::vector<Scalar> v(dim(), Scalar::zero(field));
        for (int i = 0; i < r(); ++i) v[i] = Scalar::one(field);
        return v;
    }
};

inline TrivialExtension trivial_extension(const RadSquareZero& R, const TwistedDual& M, int d) {
    if (!(*R.q == *M.R.q) || R.field != M.R.field)
        throw PreconditionError("bimodule is not over this algebra");
    if (d < 2) throw PreconditionError("grading parameter d must be >= 2");
    TrivialExtension T;
    T.q = R.q;
    T.field = R.field;
    T.d = d;
    T.lambda = M.lambda;
    T.mu = M.mu;
    const int r = R.r(), m = R.m();
    const GradedQuiver& q = *R.q;
    for (int i = 0; i < r; ++i) {
        T.degrees.push_back(0);
        T.names.push_back("e_" + q.vertices[i]);
        T.blocks.emplace_back(i, i);
    }
    for (int j = 0; j < m; ++j) {
        T.degrees.push_back(1);
        T.names.push_back(q.arrows[j].name);
        T.blocks.emplace_back(q.arrows[j].src, q.arrows[j].tgt);
    }
    for (int j = 0; j < m; ++j) {
        T.degrees.push_back(d);
        T.names.push_back(q.arrows[j].name + "_star");
        T.blocks.emplace_back(q.arrows[j].tgt, q.arrows[j].src);
    }
    for (int i = 0; i < r; ++i) {
        T.degrees.push_back(d + 1);
        T.names.push_back("e_" + q.vertices[i] + "_star");
        T.blocks.emplace_back(i, i);
    }
    const int n = T.dim();
    // dual index <-> trivext index: dual t < m: beta*, else e*
    auto dual_to_idx = [&](int t) { return t < m ? T.idx_betastar(t) : T.idx_estar(t - m); };
    T.mult.assign(n, std::vector<std::vector<std::pair<int, Scalar>>>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            auto& out = T.mult[x][y];
            bool xR = x < r + m, yR = y < r + m;
            if (xR && yR) {
                if (x < r && y < r) {
                    if (x == y) out.emplace_back(x, Scalar::one(T.field));
                } else if (x < r) {
                    if (q.arrows[y - r].src == x) out.emplace_back(y, Scalar::one(T.field));
                } else if (y < r) {
                    if (q.arrows[x - r].tgt == y) out.emplace_back(x, Scalar::one(T.field));
                } // arrow*arrow = 0
            } else if (xR && !yR) {
                int t = y - (r + m) < m ? y - (r + m) : m + (y - T.idx_estar(0));
                for (const auto& [t2, c] : M.left_act(x, t)) out.emplace_back(dual_to_idx(t2), c);
            } else if (!xR && yR) {
                int t = x - (r + m) < m ? x - (r + m) : m + (x - T.idx_estar(0));
                for (const auto& [t2, c] : M.right_act(t, y)) out.emplace_back(dual_to_idx(t2), c);
            } // D * D = 0
        }

    // associativity, exhaustively on basis triples
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                std::map<int, Scalar> acc;
                for (const auto& [p, c] : T.mult[x][y])
                    for (const auto& [s, c2] : T.mult[p][z]) {
                        auto [it, fresh] = acc.emplace(s, c * c2);
                        if (!fresh) it->second += c * c2;
                    }
                for (const auto& [p, c] : T.mult[y][z])
                    for (const auto& [s, c2] : T.mult[x][p]) {
                        auto [it, fresh] = acc.emplace(s, -(c * c2));
                        if (!fresh) it->second -= c * c2;
                    }
                for (const auto& [k, c] : acc)
                    if (!c.is_zero()) throw InternalError("trivial extension not associative");
            }
    return T;
}

// Multiply basis-coordinate vectors in a trivial extension.
inline std::vector<Scalar> te_multiply(const TrivialExtension& T, const std::vector<Scalar>& a,
                                       const std::vector<Scalar>& b) {
    std::vector<Scalar> out(T.dim(), Scalar::zero(T.field));
    for (int x = 0; x < T.dim(); ++x) {
        if (a[x].is_zero()) continue;
        for (int y = 0; y < T.dim(); ++y) {
            if (b[y].is_zero()) continue;
            for (const auto& [k, c] : T.mult[x][y]) out[k] += a[x] * b[y] * c;
        }
    }
    return out;
}

// The iterated single-vertex normalization of the twisted dual: returns the
// linear map phi with phi = id on e_i, β and a diagonal rescaling on the dual
// part, an isomorphism A(Q, λ, μ) -> A(Q, 1, 1). Vertex ordering = input order.
//
// Stage at vertex i, current twists (λ, μ): the intertwining equations
//   λ(α) f(s(α)) = λ'(α) f(α),   μ(α) f(t(α)) = μ'(α) f(α)
// are solved by f(i) = 1, f(j) = λ(α)^{-1} / μ(α)^{-1} by the final step of the
// unique walk j -> i (forward arrow / inverse), f(β) = 1 on arrows incident to
// i and f(β) = f(endpoint nearer i) otherwise.
inline Matrix walk_rescale_iso(const TrivialExtension& T) {
    const GradedQuiver& q = *T.q;
    if (!is_tree(q)) throw PreconditionError("walk_rescale_iso requires a tree quiver");
    const int r = T.r(), m = T.m(), n = T.dim();
    std::vector<Scalar> lam = T.lambda, mu = T.mu;
    std::vector<Scalar> diag(n, Scalar::one(T.field)); // accumulated phi

    for (int i = 0; i < r; ++i) {
        std::vector<Scalar> fv(r, Scalar::one(T.field));
        for (int j = 0; j < r; ++j) {
            if (j == i) continue;
            auto w = unique_walk(q, j, i);
            if (!w || w->empty()) continue;
            const WalkStep& last = w->steps.back();
            fv[j] = last.forward ? lam[last.arrow].inverse() : mu[last.arrow].inverse();
        }
        std::vector<Scalar> fa(m, Scalar::one(T.field));
        for (int a = 0; a < m; ++a) {
            if (q.arrows[a].src == i || q.arrows[a].tgt == i) continue;
            fa[a] = fv[q.arrows[a].tgt]; // equals fv[src] for non-incident arrows
        }
        for (int a = 0; a < m; ++a) diag[T.idx_betastar(a)] *= fa[a];
        for (int j = 0; j < r; ++j) diag[T.idx_estar(j)] *= fv[j];
        for (int a = 0; a < m; ++a) {
            if (q.arrows[a].tgt == i) lam[a] = Scalar::one(T.field);
            if (q.arrows[a].src == i) mu[a] = Scalar::one(T.field);
        }
    }
    for (int a = 0; a < m; ++a)
        if (!lam[a].is_one() || !mu[a].is_one())
            throw InternalError("stage iteration left a twist uncleared");

    Matrix phi(n, n, T.field);
    for (int k = 0; k < n; ++k) phi.at(k, k) = diag[k];
    return phi;
}

struct IsoReport {
    bool pass = true;
    std::string reason;
};

// Checks phi : A -> B bijective, unital and multiplicative on all basis pairs.
inline IsoReport verify_iso(const Matrix& phi, const TrivialExtension& A,
                            const TrivialExtension& B) {
    if (A.dim() != B.dim() || phi.rows != A.dim() || phi.cols != A.dim())
        return {false, "dimension mismatch"};
    if (rank(phi) != A.dim()) return {false, "not bijective"};
    std::vector<Scalar> oneA = A.one_vector();
    if (!(phi.apply(oneA) == B.one_vector())) return {false, "not unital"};
    for (int x = 0; x < A.dim(); ++x)
        for (int y = 0; y < A.dim(); ++y) {
            std::vector<Scalar> xy(A.dim(), Scalar::zero(A.field));
            for (const auto& [k, c] : A.mult[x][y]) xy[k] += c;
            std::vector<Scalar> lhs = phi.apply(xy);
            std::vector<Scalar> ex(A.dim(), Scalar::zero(A.field));
            ex[x] = Scalar::one(A.field);
            std::vector<Scalar> ey(A.dim(), Scalar::zero(A.field));
            ey[y] = Scalar::one(A.field);
            std::vector<Scalar> rhs = te_multiply(B, phi.apply(ex), phi.apply(ey));
            if (!(lhs == rhs))
                return {false, "multiplicativity fails at (" + A.names[x] + ", " + A.names[y] + ")"};
        }
    return {true, ""};
}

struct CySymReport {
    bool pass = true;
    // (i, j, p, dim e_j B^p e_i, dim e_i B^{d+1-p} e_j)
    std::vector<std::tuple<int, int, int, long, long>> table;
    std::string first_violation;
};

// Graded shadow of the CY duality: dim e_j B^p e_i = dim e_i B^{d+1-p} e_j.
inline CySymReport cy_symmetry_check(const TrivialExtension& T) {
    CySymReport rep;
    auto block_dim = [&](int j, int i, int p) {
        long c = 0;
        for (int k = 0; k < T.dim(); ++k)
            if (T.blocks[k].first == j && T.blocks[k].second == i && T.degrees[k] == p) ++c;
        return c;
    };
    for (int i = 0; i < T.r(); ++i)
        for (int j = 0; j < T.r(); ++j)
            for (int p = 0; p <= T.d + 1; ++p) {
                long a = block_dim(j, i, p);
                long b = block_dim(i, j, T.d + 1 - p);
                rep.table.emplace_back(i, j, p, a, b);
                if (a != b && rep.pass) {
                    rep.pass = false;
                    rep.first_violation = "block (i=" + T.q->vertices[i] + ", j=" +
                                          T.q->vertices[j] + ", p=" + std::to_string(p) + "): " +
                                          std::to_string(a) + " vs " + std::to_string(b);
                }
            }
    return rep;
}

// ---- bridges -----------------------------------------------------------

// Positive part of a graded trivial extension as an augmented algebra (the
// input of the bar/dual-bar machinery). Requires the standard grading.
inline AugmentedAlgebra to_augmented(const TrivialExtension& T) {
    std::vector<AugBasisElem> basis;
    std::vector<int> map_idx(T.dim(), -1);
    for (int k = 0; k < T.dim(); ++k) {
        if (T.degrees[k] == 0) continue;
        map_idx[k] = static_cast<int>(basis.size());
        basis.push_back(AugBasisElem{T.names[k], T.degrees[k], T.blocks[k].first,
                                     T.blocks[k].second});
    }
    std::vector<MEntry> entries;
    for (int x = 0; x < T.dim(); ++x) {
        if (map_idx[x] < 0) continue;
        for (int y = 0; y < T.dim(); ++y) {
            if (map_idx[y] < 0) continue;
            if (T.blocks[x].second != T.blocks[y].first) continue;
            std::vector<std::pair<int, Scalar>> val;
            for (const auto& [k, c] : T.mult[x][y]) {
                if (map_idx[k] < 0) throw InternalError("positive part is not closed");
                val.emplace_back(map_idx[k], c);
            }
            if (!val.empty()) entries.push_back(MEntry{{map_idx[x], map_idx[y]}, val});
        }
    }
    return AugmentedAlgebra::make(T.field, T.q->vertices, std::move(basis), std::move(entries));
}

// The same algebra with the grading forgotten, as a structure table for the
// stable-category machinery.
inline AlgebraPtr to_algebra_table(const TrivialExtension& T) {
    std::vector<AlgBasisElem> basis;
    for (int k = 0; k < T.dim(); ++k)
        basis.push_back(AlgBasisElem{T.names[k], T.blocks[k].first, T.blocks[k].second});
    return make_table_algebra(T.field, T.q->vertices, std::move(basis), T.mult);
}

} // namespace dgql
