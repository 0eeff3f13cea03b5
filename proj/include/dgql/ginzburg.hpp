#pragma once

#include "dgql/dgalg.hpp"
#include "dgql/rewrite.hpp"

namespace dgql {

// Formal combination of cycles of a degree-0 quiver. Cyclically equivalent
// terms may appear as distinct entries.
struct Potential {
    QuiverPtr q;
    Field field;
    long trunc = 1;
    std::vector<std::pair<Scalar, Path>> terms;

    static Potential make(QuiverPtr q, Field field, long trunc,
                          std::vector<std::pair<Scalar, Path>> terms) {
        Potential W{std::move(q), field, trunc, std::move(terms)};
        for (const auto& [c, p] : W.terms) {
            if (!path_valid(*W.q, p)) throw PreconditionError("invalid potential path");
            if (p.is_trivial())
                throw PreconditionError("length-0 potential term rejected");
            if (p.src != path_target(*W.q, p))
                throw PreconditionError("potential term is not a cycle");
            for (int a : p.arrows)
                if (W.q->arrows[a].degree != 0)
                    throw PreconditionError("potential cycles must use degree-0 arrows");
            if (path_weight(*W.q, p) > W.trunc)
                throw PreconditionError("potential term exceeds the truncation order");
            if (c.is_zero()) throw PreconditionError("zero potential coefficient");
        }
        return W;
    }

    long max_cycle_length() const {
        long l = 0;
        for (const auto& [c, p] : terms) l = std::max(l, static_cast<long>(p.length()));
        return l;
    }
};

// del_a(c) = sum of vu over decompositions c = u a v; runs target(a) -> source(a).
inline PathSeries cyclic_derivative(const Potential& W, int arrow) {
    if (arrow < 0 || arrow >= static_cast<int>(W.q->arrows.size()))
        throw PreconditionError("cyclic derivative of an arrow not in the quiver");
    PathSeries out = PathSeries::zero(W.q, W.field, W.trunc);
    const GradedQuiver& q = *W.q;
    for (const auto& [coef, cyc] : W.terms) {
        for (size_t i = 0; i < cyc.arrows.size(); ++i) {
            if (cyc.arrows[i] != arrow) continue;
            // c = u a v with u = arrows[0,i), v = arrows(i, end); term = v u
            Path vu{q.arrows[arrow].tgt, {}};
            vu.arrows.insert(vu.arrows.end(), cyc.arrows.begin() + static_cast<long>(i) + 1,
                             cyc.arrows.end());
            vu.arrows.insert(vu.arrows.end(), cyc.arrows.begin(),
                             cyc.arrows.begin() + static_cast<long>(i));
            out.add_term(std::move(vu), coef);
        }
    }
    return out;
}
inline PathSeries cyclic_derivative(const Potential& W, const std::string& arrow_name) {
    int a = W.q->arrow_index(arrow_name);
    if (a < 0) throw PreconditionError("arrow '" + arrow_name + "' not in the quiver");
    return cyclic_derivative(W, a);
}

struct GinzburgResult {
    QuiverPtr tilde;               // Q ∪ {a*: deg -1} ∪ {t_i: deg -2}
    DGQuiverAlgebra dg;
    std::vector<int> base_arrows;  // index in tilde of each arrow of Q
    std::vector<int> star_arrows;  // index of a* per arrow of Q
    std::vector<int> loop_arrows;  // index of t_i per vertex of Q
};

// Complete Ginzburg dg algebra of (Q, W): d(a)=0, d(a*)=del_a W,
// d(t_i) = e_i (sum_a (a a* - a* a)) e_i; d² is verified at construction.
inline GinzburgResult ginzburg_dg(const Potential& W) {
    const GradedQuiver& q = *W.q;
    for (const auto& a : q.arrows)
        if (a.degree != 0) throw PreconditionError("ginzburg_dg needs a degree-0 quiver");
    std::vector<Arrow> arrows = q.arrows;
    GinzburgResult res;
    int nq = static_cast<int>(q.arrows.size());
    for (int i = 0; i < nq; ++i) {
        res.base_arrows.push_back(i);
        arrows.push_back(Arrow{q.arrows[i].name + "star", q.arrows[i].tgt, q.arrows[i].src, -1, 1});
        res.star_arrows.push_back(nq + i);
    }
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
        arrows.push_back(Arrow{"t_" + q.vertices[v], v, v, -2, 1});
        res.loop_arrows.push_back(nq + nq + v);
    }
    res.tilde = GradedQuiver::make(q.vertices, std::move(arrows));

    auto lift = [&](const PathSeries& s) {
        // arrows of Q keep their indices in tilde
        PathSeries out = PathSeries::zero(res.tilde, W.field, W.trunc);
        for (const auto& [p, c] : s.terms()) out.add_term(Path{p.src, p.arrows}, c);
        return out;
    };

    std::vector<PathSeries> d;
    for (int i = 0; i < nq; ++i) d.push_back(PathSeries::zero(res.tilde, W.field, W.trunc));
    for (int i = 0; i < nq; ++i) d.push_back(lift(cyclic_derivative(W, i)));
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) {
        PathSeries dt = PathSeries::zero(res.tilde, W.field, W.trunc);
        for (int i = 0; i < nq; ++i) {
            if (q.arrows[i].src == v) // e_v a a* e_v
                dt.add_term(Path{v, {res.base_arrows[i], res.star_arrows[i]}}, Scalar::one(W.field));
            if (q.arrows[i].tgt == v) // -e_v a* a e_v
                dt.add_term(Path{v, {res.star_arrows[i], res.base_arrows[i]}},
                            -Scalar::one(W.field));
        }
        d.push_back(std::move(dt));
    }
    res.dg = DGQuiverAlgebra::make(res.tilde, W.field, W.trunc, std::move(d));
    auto rep = check_d_squared(res.dg);
    if (!rep.pass)
        throw InternalError("ginzburg differential does not square to zero at arrow " + rep.arrow);
    return res;
}

struct JacobianReport {
    DimTable dims;
    std::vector<std::string> vanished_derivatives; // identically-zero del_a W (char-p caveat)
    std::string h0_crosscheck;                     // "ok" | "skipped (...)"
};

// Ĵ(Q, W) = k̂Q / closure(del_a W), realized weightwise up to N; dims cross-checked
// against H^0 of the Ginzburg dg algebra on quivers with unit arrow weights.
inline JacobianReport jacobian(const Potential& W, long N,
                               TruncatedQuotient* out_quotient = nullptr) {
    Potential Wn = Potential::make(W.q, W.field, N, W.terms);
    std::vector<PathSeries> gens;
    JacobianReport rep;
    for (size_t i = 0; i < W.q->arrows.size(); ++i) {
        PathSeries g = retruncate(cyclic_derivative(Wn, static_cast<int>(i)), N);
        if (g.is_zero())
            rep.vanished_derivatives.push_back(W.q->arrows[i].name);
        else
            gens.push_back(std::move(g));
    }
    TruncatedQuotient qt =
        gens.empty() ? groebner_truncated(TwoSidedIdeal(W.q, W.field, N, {}), N)
                     : groebner_truncated(TwoSidedIdeal(W.q, W.field, N, std::move(gens)), N);
    rep.dims = quotient_dims(qt);

    bool unit_weights = true;
    for (const auto& a : W.q->arrows) unit_weights &= a.weight == 1;
    if (!unit_weights) {
        rep.h0_crosscheck = "skipped (custom arrow weights)";
    } else {
        auto G = ginzburg_dg(Wn);
        long margin = N - std::max<long>(1, Wn.max_cycle_length());
        auto coh = cohomology_dims(G.dg, 0, 0, N);
        std::map<long, long> h0;
        for (const auto& [k, v] : coh.dims) {
            auto [p, w, s, t] = k;
            (void)p;
            (void)s;
            (void)t;
            h0[w] += v;
        }
        for (long w = 0; w <= margin; ++w) {
            long lhs = w < static_cast<long>(rep.dims.by_weight.size()) ? rep.dims.by_weight[w] : 0;
            long rhs = h0.count(w) ? h0[w] : 0;
            if (lhs != rhs)
                throw InternalError("jacobian/H0 mismatch at weight " + std::to_string(w) + ": " +
                                    std::to_string(lhs) + " vs " + std::to_string(rhs));
        }
        rep.h0_crosscheck = "ok (weights <= " + std::to_string(std::max<long>(0, margin)) + ")";
    }
    if (out_quotient) *out_quotient = std::move(qt);
    return rep;
}

} // namespace dgql
