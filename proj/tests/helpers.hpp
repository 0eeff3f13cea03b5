#pragma once

// Shared generators and independent oracles for the test and acceptance suites.

#include <random>

#include "dgql/barkoszul.hpp"
#include "dgql/frobenius.hpp"
#include "dgql/ginzburg.hpp"
#include "dgql/trivext.hpp"

namespace dgqltest {

using namespace dgql;

using Rng = std::mt19937_64;

inline long rnd(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Scalar random_nonzero(Rng& rng, const Field& f) {
    if (f.kind == FieldKind::Prime) return Scalar::from_int(f, rnd(rng, 1, f.p - 1));
    long n = rnd(rng, -4, 4);
    if (n == 0) n = 1;
    long d = rnd(rng, 1, 3);
    return Scalar::from_fraction(f, n, d);
}

// ---- quivers -------------------------------------------------------------

inline QuiverPtr random_tree(Rng& rng, int nverts) {
    std::vector<std::string> verts;
    for (int i = 0; i < nverts; ++i) verts.push_back("v" + std::to_string(i));
    std::vector<Arrow> arrows;
    for (int i = 1; i < nverts; ++i) {
        int parent = static_cast<int>(rnd(rng, 0, i - 1));
        bool up = rnd(rng, 0, 1) == 0;
        arrows.push_back(Arrow{"a" + std::to_string(i - 1), up ? parent : i, up ? i : parent, 0, 1});
    }
    return GradedQuiver::make(verts, arrows);
}

inline QuiverPtr line_quiver(int n) { // A_n: v0 -> v1 -> ... -> v_{n-1}
    std::vector<std::string> verts;
    std::vector<Arrow> arrows;
    for (int i = 0; i < n; ++i) verts.push_back("v" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i)
        arrows.push_back(Arrow{"a" + std::to_string(i), i, i + 1, 0, 1});
    return GradedQuiver::make(verts, arrows);
}

inline QuiverPtr star_quiver(int leaves) { // center -> each leaf
    std::vector<std::string> verts{"c"};
    std::vector<Arrow> arrows;
    for (int i = 0; i < leaves; ++i) {
        verts.push_back("l" + std::to_string(i));
        arrows.push_back(Arrow{"a" + std::to_string(i), 0, i + 1, 0, 1});
    }
    return GradedQuiver::make(verts, arrows);
}

inline long count_paths(const GradedQuiver& q) {
    long total = 0;
    std::function<void(Path&)> dfs = [&](Path& p) {
        ++total;
        int at = path_target(q, p);
        for (size_t a = 0; a < q.arrows.size(); ++a) {
            if (q.arrows[a].src != at) continue;
            p.arrows.push_back(static_cast<int>(a));
            dfs(p);
            p.arrows.pop_back();
        }
    };
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
        Path p = Path::trivial(v);
        dfs(p);
    }
    return total;
}

// ---- quivers with potential ----------------------------------------------

struct RandomQP {
    QuiverPtr q;
    Potential W;
};

inline std::optional<Path> random_cycle(Rng& rng, const GradedQuiver& q, int maxlen) {
    int start = static_cast<int>(rnd(rng, 0, static_cast<long>(q.vertices.size()) - 1));
    Path p = Path::trivial(start);
    int len = static_cast<int>(rnd(rng, 1, maxlen));
    for (int i = 0; i < len; ++i) {
        std::vector<int> outs;
        for (size_t a = 0; a < q.arrows.size(); ++a)
            if (q.arrows[a].src == path_target(q, p)) outs.push_back(static_cast<int>(a));
        if (outs.empty()) return std::nullopt;
        p.arrows.push_back(outs[rnd(rng, 0, static_cast<long>(outs.size()) - 1)]);
    }
    if (path_target(q, p) != start) return std::nullopt;
    return p;
}

inline RandomQP random_quiver_with_potential(Rng& rng, const Field& f, long trunc) {
    for (;;) {
        int nverts = static_cast<int>(rnd(rng, 1, 4));
        int narrows = static_cast<int>(rnd(rng, nverts, 6));
        std::vector<std::string> verts;
        for (int i = 0; i < nverts; ++i) verts.push_back("v" + std::to_string(i));
        std::vector<Arrow> arrows;
        for (int i = 0; i < narrows; ++i)
            arrows.push_back(Arrow{"a" + std::to_string(i),
                                   static_cast<int>(rnd(rng, 0, nverts - 1)),
                                   static_cast<int>(rnd(rng, 0, nverts - 1)), 0, 1});
        QuiverPtr q = GradedQuiver::make(verts, arrows);
        std::vector<std::pair<Scalar, Path>> terms;
        for (int tries = 0; tries < 20 && terms.size() < 3; ++tries)
            if (auto c = random_cycle(rng, *q, 4)) terms.emplace_back(random_nonzero(rng, f), *c);
        if (terms.empty()) continue;
        return RandomQP{q, Potential::make(q, f, trunc, std::move(terms))};
    }
}

// ---- augmented algebras ----------------------------------------------------

// Truncated path algebra on a degree-graded quiver (paths of degree <= 3,
// heavier products vanish), basis rescaled by random units; optionally a
// square-zero dg piece m1(u) = v glued on. Always a valid dg algebra.
inline AugmentedAlgebra random_augmented(Rng& rng, const Field& f) {
    for (;;) {
        int r = static_cast<int>(rnd(rng, 1, 3));
        std::vector<std::string> idems;
        for (int i = 0; i < r; ++i) idems.push_back("i" + std::to_string(i));
        int narrows = static_cast<int>(rnd(rng, 0, 3));
        struct GArrow {
            int src, tgt, deg;
        };
        std::vector<GArrow> garr;
        for (int a = 0; a < narrows; ++a)
            garr.push_back(GArrow{static_cast<int>(rnd(rng, 0, r - 1)),
                                  static_cast<int>(rnd(rng, 0, r - 1)),
                                  static_cast<int>(rnd(rng, 1, 3))});
        // paths of degree <= 3
        struct PPath {
            std::vector<int> word;
            int src, tgt, deg;
        };
        std::vector<PPath> paths;
        std::function<void(PPath&)> grow = [&](PPath& p) {
            for (int a = 0; a < narrows; ++a) {
                if (garr[a].src != p.tgt || p.deg + garr[a].deg > 3) continue;
                PPath np = p;
                np.word.push_back(a);
                np.tgt = garr[a].tgt;
                np.deg += garr[a].deg;
                paths.push_back(np);
                grow(np);
            }
        };
        for (int a = 0; a < narrows; ++a) {
            PPath p{{a}, garr[a].src, garr[a].tgt, garr[a].deg};
            paths.push_back(p);
            grow(p);
        }
        bool with_dg = rnd(rng, 0, 2) == 0;
        size_t dgsize = with_dg ? 2 : 0;
        if (paths.size() + dgsize > 5 || paths.size() + dgsize == 0) continue;

        std::vector<AugBasisElem> basis;
        std::map<std::vector<int>, int> index;
        for (size_t k = 0; k < paths.size(); ++k) {
            basis.push_back(AugBasisElem{"p" + std::to_string(k), paths[k].deg, paths[k].src,
                                         paths[k].tgt});
            index[paths[k].word] = static_cast<int>(k);
        }
        std::vector<Scalar> scale;
        for (size_t k = 0; k < basis.size() + dgsize; ++k) scale.push_back(random_nonzero(rng, f));
        std::vector<MEntry> entries;
        for (size_t x = 0; x < paths.size(); ++x)
            for (size_t y = 0; y < paths.size(); ++y) {
                if (paths[x].tgt != paths[y].src || paths[x].deg + paths[y].deg > 3) continue;
                std::vector<int> w = paths[x].word;
                w.insert(w.end(), paths[y].word.begin(), paths[y].word.end());
                auto it = index.find(w);
                if (it == index.end()) continue;
                Scalar c = scale[x] * scale[y] * scale[it->second].inverse();
                entries.push_back(MEntry{{static_cast<int>(x), static_cast<int>(y)},
                                         {{it->second, c}}});
            }
        if (with_dg) {
            int v = static_cast<int>(rnd(rng, 0, r - 1));
            int w2 = static_cast<int>(rnd(rng, 0, r - 1)); // any block, not just loops
            int d = static_cast<int>(rnd(rng, 1, 2));
            int u_idx = static_cast<int>(basis.size());
            basis.push_back(AugBasisElem{"u", d, v, w2});
            basis.push_back(AugBasisElem{"w", d + 1, v, w2});
            entries.push_back(MEntry{{u_idx}, {{u_idx + 1, random_nonzero(rng, f)}}});
        }
        return AugmentedAlgebra::make(f, idems, std::move(basis), std::move(entries));
    }
}

// ---- oracles ---------------------------------------------------------------

// Quotient dimensions by brute force: dim_w = #monomials_w - rank{u g v of
// weight w}. Generators must be weight-homogeneous.
inline std::vector<long> ideal_quotient_dims_oracle(QuiverPtr q, const Field& f,
                                                    const std::vector<PathSeries>& gens, long N) {
    std::vector<Path> mons;
    std::function<void(Path&, long)> dfs = [&](Path& p, long w) {
        mons.push_back(p);
        int at = path_target(*q, p);
        for (size_t a = 0; a < q->arrows.size(); ++a) {
            if (q->arrows[a].src != at || w + q->arrows[a].weight > N) continue;
            p.arrows.push_back(static_cast<int>(a));
            dfs(p, w + q->arrows[a].weight);
            p.arrows.pop_back();
        }
    };
    for (int v = 0; v < static_cast<int>(q->vertices.size()); ++v) {
        Path p = Path::trivial(v);
        dfs(p, 0);
    }
    std::map<std::vector<long>, int> dummy;
    std::map<long, std::map<std::string, int>> index_by_weight;
    auto key = [&](const Path& p) { return path_to_string(*q, p) + "@" + std::to_string(p.src); };
    std::map<long, long> mon_count;
    for (const Path& p : mons) {
        long w = path_weight(*q, p);
        auto& idx = index_by_weight[w];
        idx.emplace(key(p), static_cast<int>(idx.size()));
        ++mon_count[w];
    }
    std::map<long, RowSpace> span;
    for (const auto& g : gens) {
        auto hw = [&]() {
            long w = path_weight(*q, g.terms().front().first);
            for (const auto& [p, c] : g.terms())
                if (path_weight(*q, p) != w) throw InternalError("oracle needs homogeneous gens");
            return w;
        };
        long wg = hw();
        for (const Path& u : mons)
            for (const Path& v : mons) {
                long w = path_weight(*q, u) + wg + path_weight(*q, v);
                if (w > N) continue;
                PathSeries prod = PathSeries::monomial(q, f, N, u) * g *
                                  PathSeries::monomial(q, f, N, v);
                if (prod.is_zero()) continue;
                auto& idx = index_by_weight[w];
                auto it = span.find(w);
                if (it == span.end())
                    it = span.emplace(w, RowSpace(static_cast<int>(idx.size()), f)).first;
                std::vector<Scalar> vec(idx.size(), Scalar::zero(f));
                for (const auto& [p, c] : prod.terms()) vec[idx.at(key(p))] = c;
                it->second.add(std::move(vec));
            }
    }
    (void)dummy;
    std::vector<long> dims(N + 1, 0);
    for (const auto& [w, c] : mon_count) {
        long rk = span.count(w) ? span.at(w).dim() : 0;
        dims[w] = c - rk;
    }
    return dims;
}

// Stable Hom by direct enumeration of the maps factoring through every
// indecomposable projective (independent of the envelope route).
inline long stable_hom_oracle(const FDModule& M, const FDModule& N) {
    const AlgebraTable& A = *M.A;
    int width = 0;
    for (int v = 0; v < A.r; ++v) width += N.dims[v] * M.dims[v];
    RowSpace T(width, A.field);
    for (int j = 0; j < A.r; ++j) {
        FDModule P = projective_module(M.A, j);
        auto to_p = hom_basis(M, P);
        auto from_p = hom_basis(P, N);
        for (const auto& f : to_p)
            for (const auto& g : from_p) T.add(flatten_map(compose(g, f), A.field));
    }
    long dim = 0;
    RowSpace all = T;
    for (const auto& h : hom_basis(M, N))
        if (all.add(flatten_map(h, A.field))) ++dim;
    return dim;
}

// Exhaustive search over diagonal rescalings of the dual basis (prime fields,
// small trees): does any diagonal map give an isomorphism A -> B?
inline bool diagonal_iso_exists(const TrivialExtension& A, const TrivialExtension& B) {
    const Field& f = A.field;
    int units = f.p - 1;
    int slots = A.r() + A.m(); // one scalar per dual basis element
    long total = 1;
    for (int i = 0; i < slots; ++i) total *= units;
    for (long code = 0; code < total; ++code) {
        long c = code;
        Matrix phi = Matrix::identity(A.dim(), f);
        for (int i = 0; i < slots; ++i) {
            long val = 1 + c % units;
            c /= units;
            phi.at(A.r() + A.m() + i, A.r() + A.m() + i) = Scalar::from_int(f, val);
        }
        if (verify_iso(phi, A, B).pass) return true;
    }
    return false;
}

// k[x]/(x^n) and its indecomposables.
inline AlgebraPtr kx_mod_xn(const Field& f, int n, long trunc = 24) {
    auto q = GradedQuiver::make({"v"}, {{"x", 0, 0, 0, 1}});
    Path xn{0, std::vector<int>(n, 0)};
    return make_presented_algebra(q, f, {PathSeries::monomial(q, f, trunc, xn)}, trunc);
}

inline FDModule jordan_module(AlgebraPtr A, int size) {
    Matrix X(size, size, A->field);
    for (int i = 0; i + 1 < size; ++i) X.at(i + 1, i) = Scalar::one(A->field);
    return make_module(A, {size}, {{0, X}});
}

} // namespace dgqltest
