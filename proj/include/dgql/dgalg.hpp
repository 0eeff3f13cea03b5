#pragma once

#include <climits>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "dgql/intlp.hpp"
#include "dgql/linalg.hpp"
#include "dgql/rewrite.hpp"
#include "dgql/series.hpp"

namespace dgql {

// Complete dg-quiver algebra (k̂Q, d), truncated at `trunc`. The differential is
// given on arrows (finitely many terms each) and extended by the graded Leibniz
// rule; d kills trivial paths.
struct DGQuiverAlgebra {
    QuiverPtr q;
    Field field;
    long trunc = 1;
    std::vector<PathSeries> d; // per arrow index

    static DGQuiverAlgebra make(QuiverPtr q, Field field, long trunc,
                                std::vector<PathSeries> d_arrows) {
        DGQuiverAlgebra A{std::move(q), field, trunc, std::move(d_arrows)};
        if (A.d.size() != A.q->arrows.size())
            throw PreconditionError("differential must be given on every arrow");
        for (size_t ai = 0; ai < A.d.size(); ++ai) {
            const Arrow& a = A.q->arrows[ai];
            const PathSeries& s = A.d[ai];
            if (s.field() != field || !(*s.quiver() == *A.q))
                throw PreconditionError("differential series over a different quiver/field");
            for (const auto& [p, c] : s.terms()) {
                if (p.src != a.src || path_target(*A.q, p) != a.tgt)
                    throw PreconditionError("d(" + a.name + ") has a term with wrong endpoints");
                if (path_degree(*A.q, p) != a.degree + 1)
                    throw PreconditionError("d(" + a.name + ") has a term of wrong degree");
            }
        }
        return A;
    }
};

// d(a_1...a_n) = sum_i (-1)^{deg(a_1...a_{i-1})} a_1...d(a_i)...a_n, truncated at
// max_weight (defaults to the truncation of f), linear in f.
inline PathSeries extend_leibniz(const DGQuiverAlgebra& A, const PathSeries& f,
                                 long max_weight = -1) {
    if (f.field() != A.field || !(*f.quiver() == *A.q))
        throw PreconditionError("series incompatible with the dg algebra");
    if (max_weight < 0) max_weight = f.trunc();
    PathSeries out = PathSeries::zero(A.q, A.field, max_weight);
    for (const auto& [p, c] : f.terms()) {
        int deg_prefix = 0;
        for (size_t i = 0; i < p.arrows.size(); ++i) {
            int a = p.arrows[i];
            if (!A.d[a].is_zero()) {
                Path prefix{p.src, {p.arrows.begin(), p.arrows.begin() + static_cast<long>(i)}};
                Path suffix{A.q->arrows[a].tgt,
                            {p.arrows.begin() + static_cast<long>(i) + 1, p.arrows.end()}};
                Scalar sc = (deg_prefix % 2 != 0) ? -c : c;
                out += PathSeries::monomial(A.q, A.field, max_weight, prefix, sc) *
                       retruncate(A.d[a], max_weight) *
                       PathSeries::monomial(A.q, A.field, max_weight, suffix);
            }
            deg_prefix += A.q->arrows[a].degree;
        }
    }
    return out;
}

struct D2Report {
    bool pass = true;
    std::string arrow;   // first offending arrow
    long weight = -1;    // weight of its smallest nonzero residue term
    std::string block;   // "src->tgt" of that term
    PathSeries residue;
};

// Verifies d(d(alpha)) = 0 in weights <= trunc for every arrow, in declaration
// order; failure is a report, not an error.
inline D2Report check_d_squared(const DGQuiverAlgebra& A) {
    for (size_t ai = 0; ai < A.q->arrows.size(); ++ai) {
        PathSeries r = extend_leibniz(A, A.d[ai], A.trunc);
        if (r.is_zero()) continue;
        const auto& [p, c] = r.terms().front();
        (void)c;
        D2Report rep;
        rep.pass = false;
        rep.arrow = A.q->arrows[ai].name;
        rep.weight = path_weight(*A.q, p);
        rep.block = A.q->vertices[p.src] + "->" + A.q->vertices[path_target(*A.q, p)];
        rep.residue = r;
        return rep;
    }
    return D2Report{};
}

struct WeightAssignment {
    std::vector<long> w; // per arrow, positive
};

namespace detail {

// Constraint rows: for every arrow a and every term t of d(a),
// sum_{b in t} w(b) - w(a) = 0. Returns rows as integer vectors over all arrows.
inline std::vector<std::vector<long>> weight_rows(const DGQuiverAlgebra& A) {
    std::vector<std::vector<long>> rows;
    for (size_t ai = 0; ai < A.d.size(); ++ai) {
        for (const auto& [p, c] : A.d[ai].terms()) {
            std::vector<long> row(A.q->arrows.size(), 0);
            for (int b : p.arrows) row[b] += 1;
            row[ai] -= 1;
            bool nonzero = false;
            for (long v : row) nonzero |= v != 0;
            if (nonzero) rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::optional<std::vector<long>> solve_component_ilp(
    const std::vector<std::vector<long>>& rows, const std::vector<int>& vars,
    const std::vector<int>& name_order) {
    using intlp::Rat;
    const int n = static_cast<int>(vars.size());
    intlp::BoxILP base;
    for (const auto& r : rows) {
        std::vector<Rat> row(n);
        for (int j = 0; j < n; ++j) row[j] = r[vars[j]];
        base.A.push_back(std::move(row));
        base.b.push_back(Rat(0));
    }
    base.c.assign(n, Rat(1));
    base.lo.assign(n, 1);
    base.hi.assign(n, std::nullopt);

    intlp::LPResult root = intlp::box_lp(base);
    if (root.status != intlp::LPStatus::Optimal) return std::nullopt;
    // scale the LP vertex to a feasible integer point -> finite search box
    mpz_class lcm(1);
    for (const auto& x : root.x) lcm = ::lcm(lcm, x.get_den());
    Rat ub(0);
    for (const auto& x : root.x) ub += x * Rat(lcm);

    auto with_total = [&](const intlp::BoxILP& q, const Rat& total) {
        intlp::BoxILP r = q;
        for (auto& row : r.A) row.push_back(Rat(0));
        std::vector<Rat> sum(n + 1, Rat(1));
        r.A.push_back(sum); // sum w + s = total
        r.b.push_back(total);
        r.c.push_back(Rat(0));
        r.lo.push_back(0);
        r.hi.push_back(std::nullopt);
        return r;
    };

    auto opt = intlp::ilp_minimize(with_total(base, ub));
    if (!opt) return std::nullopt;
    long total = 0;
    for (int j = 0; j < n; ++j) total += (*opt)[j];

    // lexicographic refinement by arrow-name order at the optimal total
    intlp::BoxILP fixed = base;
    {
        std::vector<Rat> sum(n, Rat(1));
        fixed.A.push_back(sum);
        fixed.b.push_back(Rat(total));
    }
    std::vector<long> result(n, 0);
    for (int pos : name_order) {
        intlp::BoxILP probe = fixed;
        std::fill(probe.c.begin(), probe.c.end(), Rat(0));
        probe.c[pos] = 1;
        auto sol = intlp::ilp_minimize(probe);
        if (!sol) throw InternalError("weight lex refinement lost feasibility");
        result[pos] = (*sol)[pos];
        std::vector<Rat> eq(n, Rat(0));
        eq[pos] = 1;
        fixed.A.push_back(eq);
        fixed.b.push_back(Rat(result[pos]));
    }
    return result;
}

} // namespace detail

// Positive integer weights making every d(alpha) weight-homogeneous of the
// weight of alpha; minimal total weight, ties broken by arrow-name order.
inline std::optional<WeightAssignment> solve_weights(const DGQuiverAlgebra& A) {
    const int m = static_cast<int>(A.q->arrows.size());
    auto rows = detail::weight_rows(A);
    // connected components of arrows linked by shared rows
    std::vector<int> comp(m);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (const auto& r : rows) {
        int first = -1;
        for (int j = 0; j < m; ++j) {
            if (r[j] == 0) continue;
            if (first < 0)
                first = j;
            else
                comp[find(j)] = find(first);
        }
    }
    std::map<int, std::vector<int>> groups;
    for (int j = 0; j < m; ++j) groups[find(j)].push_back(j);

    std::vector<long> w(m, 1);
    for (const auto& [root, vars] : groups) {
        (void)root;
        std::vector<std::vector<long>> crows;
        for (const auto& r : rows) {
            bool touches = false;
            for (int v : vars) touches |= r[v] != 0;
            if (touches) crows.push_back(r);
        }
        if (crows.empty()) continue; // unconstrained arrows get weight 1

        // rational kernel of the component system
        Field QQ = Field::rationals();
        Matrix M(static_cast<int>(crows.size()), static_cast<int>(vars.size()), QQ);
        for (size_t i = 0; i < crows.size(); ++i)
            for (size_t j = 0; j < vars.size(); ++j)
                M.at(static_cast<int>(i), static_cast<int>(j)) =
                    Scalar::from_int(QQ, crows[i][vars[j]]);
        auto ker = kernel_basis(M);
        if (ker.empty()) return std::nullopt; // only w = 0 solves: inhomogeneous differential
        if (ker.size() == 1) {
            // primitive positive integer vector (or infeasible)
            mpz_class lc(1);
            for (const auto& s : ker[0]) lc = lcm(lc, s.rat().get_den());
            std::vector<mpz_class> v(vars.size());
            mpz_class g(0);
            for (size_t j = 0; j < vars.size(); ++j) {
                v[j] = ker[0][j].rat().get_num() * (lc / ker[0][j].rat().get_den());
                g = gcd(g, v[j]);
            }
            if (g == 0) return std::nullopt;
            int sign = 0;
            for (const auto& x : v)
                if (x != 0) {
                    sign = x > 0 ? 1 : -1;
                    break;
                }
            for (size_t j = 0; j < vars.size(); ++j) {
                mpz_class val = v[j] * sign / g;
                if (val <= 0) return std::nullopt;
                w[vars[j]] = static_cast<long>(val.get_si());
            }
            continue;
        }
        // coupled component: exact ILP
        const std::vector<int>& vlist = vars;
        std::vector<int> order(vlist.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return A.q->lexrank[vlist[a]] < A.q->lexrank[vlist[b]];
        });
        auto sol = detail::solve_component_ilp(crows, vars, order);
        if (!sol) return std::nullopt;
        for (size_t j = 0; j < vars.size(); ++j) w[vars[j]] = (*sol)[j];
    }
    return WeightAssignment{std::move(w)};
}

// Minimality (d(arrows) in m̂²), transcribed as: no weight-1, length-1 terms.
inline bool is_minimal(const DGQuiverAlgebra& A) {
    for (const auto& s : A.d)
        for (const auto& [p, c] : s.terms())
            if (p.length() == 1 && path_weight(*A.q, p) == 1) return false;
    return true;
}

struct CohomTable {
    bool exact = false;
    int pmin = 0, pmax = 0;
    long trunc = 0;
    std::optional<WeightAssignment> grading;
    std::map<std::tuple<int, long, int, int>, long> dims; // (degree, weight, src, tgt) -> dim
};

namespace detail {

inline void enumerate_monomials(const GradedQuiver& q, const std::vector<long>& gw, long maxw,
                                int degmin, int degmax, Path& p, long w, int deg,
                                std::map<std::tuple<int, long, int, int>, std::vector<Path>>& out) {
    if (deg >= degmin && deg <= degmax)
        out[{deg, w, p.src, path_target(q, p)}].push_back(p);
    int at = path_target(q, p);
    for (size_t ai = 0; ai < q.arrows.size(); ++ai) {
        const Arrow& a = q.arrows[ai];
        if (a.src != at || w + gw[ai] > maxw) continue;
        p.arrows.push_back(static_cast<int>(ai));
        enumerate_monomials(q, gw, maxw, degmin, degmax, p, w + gw[ai], deg + a.degree, out);
        p.arrows.pop_back();
    }
}

} // namespace detail

// Blockwise dim H^p for p in [pmin, pmax], weights <= N. Exact (weightwise, for
// the full completion) when a WeightAssignment exists; otherwise approximate at
// the stored-weight truncation, with weights reported along the filtration.
inline CohomTable cohomology_dims(const DGQuiverAlgebra& A, int pmin, int pmax, long N) {
    if (pmin > pmax) throw PreconditionError("empty degree window");
    if (!check_d_squared(A).pass) throw PreconditionError("d^2 != 0: refusing cohomology");
    CohomTable table;
    table.pmin = pmin;
    table.pmax = pmax;
    table.trunc = N;
    auto wa = solve_weights(A);
    table.exact = wa.has_value();
    table.grading = wa;

    std::vector<long> gw(A.q->arrows.size(), 1);
    if (wa)
        gw = wa->w;
    else
        for (size_t i = 0; i < gw.size(); ++i) gw[i] = A.q->arrows[i].weight;

    std::map<std::tuple<int, long, int, int>, std::vector<Path>> blocks;
    for (int v = 0; v < static_cast<int>(A.q->vertices.size()); ++v) {
        Path p = Path::trivial(v);
        detail::enumerate_monomials(*A.q, gw, N, pmin - 1, pmax + 1, p, 0, 0, blocks);
    }

    long maxdlen = 1;
    for (const auto& s : A.d)
        for (const auto& [p, c] : s.terms()) maxdlen = std::max(maxdlen, (long)p.length());
    long maxaw = 1;
    for (const auto& a : A.q->arrows) maxaw = std::max(maxaw, (long)a.weight);
    // stored-weight bound that loses nothing for monomials of length <= N
    long safe = (N + maxdlen) * maxaw + 1;

    if (wa) {
        auto d_rank = [&](const std::vector<Path>* from, const std::vector<Path>* to) -> int {
            if (!from || from->empty() || !to || to->empty()) return 0;
            std::map<std::vector<int>, int> index;
            for (size_t k = 0; k < to->size(); ++k) index[(*to)[k].arrows] = static_cast<int>(k);
            Matrix M(static_cast<int>(to->size()), static_cast<int>(from->size()), A.field);
            for (size_t c = 0; c < from->size(); ++c) {
                PathSeries img = extend_leibniz(
                    A, PathSeries::monomial(A.q, A.field, safe, (*from)[c]), safe);
                for (const auto& [pp, cc] : img.terms()) {
                    auto it = index.find(pp.arrows);
                    if (it == index.end()) throw InternalError("cohomology block leak");
                    M.at(it->second, static_cast<int>(c)) = cc;
                }
            }
            return rank(std::move(M));
        };
        for (const auto& [key, mons] : blocks) {
            const auto [deg, wgt, src, tgt] = key;
            if (deg < pmin || deg > pmax) continue;
            long w2 = wgt;
            int s2 = src, t2 = tgt;
            auto find = [&, w2, s2, t2](int dd) -> const std::vector<Path>* {
                auto it = blocks.find({dd, w2, s2, t2});
                return it == blocks.end() ? nullptr : &it->second;
            };
            int out_rank = d_rank(&mons, find(deg + 1));
            int in_rank = d_rank(find(deg - 1), &mons);
            long dim = static_cast<long>(mons.size()) - out_rank - in_rank;
            if (dim != 0) table.dims[key] = dim;
        }
        return table;
    }

    // approximate: stored-weight truncation, weight = filtration increments
    std::map<std::tuple<int, int, int>, std::vector<Path>> flat; // (deg, src, tgt)
    for (const auto& [key, mons] : blocks) {
        auto [deg, wgt, src, tgt] = key;
        (void)wgt;
        auto& v = flat[{deg, src, tgt}];
        v.insert(v.end(), mons.begin(), mons.end());
    }
    for (auto& [key, mons] : flat) {
        (void)key;
        std::sort(mons.begin(), mons.end(),
                  [&](const Path& a, const Path& b) { return path_cmp(*A.q, a, b) < 0; });
    }
    for (const auto& [key, mons] : flat) {
        auto [deg, src, tgt] = key;
        if (deg < pmin || deg > pmax) continue;
        int s2 = src, t2 = tgt;
        auto get = [&, s2, t2](int dd) -> const std::vector<Path>* {
            auto it = flat.find({dd, s2, t2});
            return it == flat.end() ? nullptr : &it->second;
        };
        const std::vector<Path>* up = get(deg + 1);
        const std::vector<Path>* down = get(deg - 1);
        const std::vector<Path>& monlist = mons;
        std::map<std::vector<int>, int> index;
        for (size_t k = 0; k < monlist.size(); ++k) index[monlist[k].arrows] = static_cast<int>(k);

        auto expand = [&](const Path& p) {
            std::vector<Scalar> col(monlist.size(), Scalar::zero(A.field));
            PathSeries img = extend_leibniz(A, PathSeries::monomial(A.q, A.field, N, p), N);
            for (const auto& [pp, cc] : img.terms()) {
                auto it = index.find(pp.arrows);
                if (it != index.end()) col[it->second] = cc;
            }
            return col;
        };
        RowSpace image(static_cast<int>(mons.size()), A.field);
        if (down)
            for (const Path& p : *down) image.add(expand(p));

        // kernel of d restricted to the weight filtration, per weight
        std::map<std::vector<int>, int> upindex;
        if (up)
            for (size_t k = 0; k < up->size(); ++k) upindex[(*up)[k].arrows] = static_cast<int>(k);
        long prev = 0;
        for (long wcut = 0; wcut <= N; ++wcut) {
            std::vector<int> cols;
            for (size_t k = 0; k < mons.size(); ++k)
                if (path_weight(*A.q, mons[k]) <= wcut) cols.push_back(static_cast<int>(k));
            if (cols.empty()) continue;
            Matrix M(up ? static_cast<int>(up->size()) : 0, static_cast<int>(cols.size()), A.field);
            if (up)
                for (size_t c = 0; c < cols.size(); ++c) {
                    PathSeries img = extend_leibniz(
                        A, PathSeries::monomial(A.q, A.field, N, mons[cols[c]]), N);
                    for (const auto& [pp, cc] : img.terms()) {
                        auto it = upindex.find(pp.arrows);
                        if (it != upindex.end()) M.at(it->second, static_cast<int>(c)) = cc;
                    }
                }
            auto ker = kernel_basis(M);
            long base = image.dim();
            RowSpace both = image;
            for (const auto& kv : ker) {
                std::vector<Scalar> v(mons.size(), Scalar::zero(A.field));
                for (size_t c = 0; c < cols.size(); ++c) v[cols[c]] = kv[c];
                both.add(std::move(v));
            }
            long r = both.dim() - base;
            if (r - prev != 0) table.dims[{deg, wcut, src, tgt}] = r - prev;
            prev = r;
        }
    }
    return table;
}

// Certificate that H^0 is presented with zero relation ideal up to N: the image
// of d in degree 0 vanishes, i.e. d kills every degree -1 monomial.
inline bool h0_relations_vanish(const DGQuiverAlgebra& A, long N) {
    auto wa = solve_weights(A);
    std::vector<long> gw(A.q->arrows.size(), 1);
    if (wa)
        gw = wa->w;
    else
        for (size_t i = 0; i < gw.size(); ++i) gw[i] = A.q->arrows[i].weight;
    std::map<std::tuple<int, long, int, int>, std::vector<Path>> blocks;
    for (int v = 0; v < static_cast<int>(A.q->vertices.size()); ++v) {
        Path p = Path::trivial(v);
        detail::enumerate_monomials(*A.q, gw, N, -1, -1, p, 0, 0, blocks);
    }
    for (const auto& [key, mons] : blocks) {
        (void)key;
        for (const Path& p : mons)
            if (!extend_leibniz(A, PathSeries::monomial(A.q, A.field, N, p), N).is_zero())
                return false;
    }
    return true;
}

} // namespace dgql
