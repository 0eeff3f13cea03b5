#pragma once

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "dgql/errors.hpp"

// Small exact rational simplex + branch-and-bound, enough to pick canonical
// minimal positive integer weight assignments. Deterministic (Bland's rule).
namespace dgql::intlp {

using Rat = mpq_class;

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rat> x;
    Rat value;
};

// min c^T x  s.t.  A x = b, x >= 0.
inline LPResult simplex_standard(std::vector<std::vector<Rat>> A, std::vector<Rat> b,
                                 std::vector<Rat> c) {
    const int m = static_cast<int>(A.size());
    const int n = m ? static_cast<int>(A[0].size()) : static_cast<int>(c.size());
    for (int i = 0; i < m; ++i)
        if (b[i] < 0) {
            b[i] = -b[i];
            for (auto& v : A[i]) v = -v;
        }
    // tableau with artificial variables appended
    const int total = n + m;
    std::vector<std::vector<Rat>> T(m, std::vector<Rat>(total + 1, Rat(0)));
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = 1;
        T[i][total] = b[i];
        basis[i] = n + i;
    }
    std::vector<Rat> obj(total + 1, Rat(0));

    auto pivot = [&](int r, int cidx) {
        Rat inv = 1 / T[r][cidx];
        for (auto& v : T[r]) v *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || T[i][cidx] == 0) continue;
            Rat f = T[i][cidx];
            for (int j = 0; j <= total; ++j) T[i][j] -= f * T[r][j];
        }
        if (obj[cidx] != 0) {
            Rat f = obj[cidx];
            for (int j = 0; j <= total; ++j) obj[j] -= f * T[r][j];
        }
        basis[r] = cidx;
    };

    auto run = [&](int ncols) -> bool { // false = unbounded
        for (;;) {
            int enter = -1;
            for (int j = 0; j < ncols; ++j)
                if (obj[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int i = 0; i < m; ++i) {
                if (T[i][enter] <= 0) continue;
                Rat ratio = T[i][total] / T[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    };

    // phase 1: minimize sum of artificials
    for (int j = 0; j < n; ++j) {
        Rat s(0);
        for (int i = 0; i < m; ++i) s += T[i][j];
        obj[j] = -s;
    }
    {
        Rat s(0);
        for (int i = 0; i < m; ++i) s += T[i][total];
        obj[total] = -s; // objective value = -obj[total]
    }
    run(n); // artificial columns never need to re-enter
    if (-obj[total] != 0) return {LPStatus::Infeasible, {}, Rat(0)};
    // drive remaining artificials out of the basis
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (T[i][j] != 0) {
                col = j;
                break;
            }
        if (col >= 0) pivot(i, col);
        // else: redundant row; keep, it stays inert
    }

    // phase 2
    std::fill(obj.begin(), obj.end(), Rat(0));
    for (int j = 0; j < n; ++j) obj[j] = c[j];
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n || obj[basis[i]] == 0) continue;
        Rat f = obj[basis[i]];
        for (int j = 0; j <= total; ++j) obj[j] -= f * T[i][j];
    }
    if (!run(n)) return {LPStatus::Unbounded, {}, Rat(0)};

    LPResult res;
    res.status = LPStatus::Optimal;
    res.x.assign(n, Rat(0));
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = T[i][total];
    res.value = 0;
    for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

// min c^T w  s.t.  A w = b, lo <= w (<= hi where set), w integral.
// `ub_total`: known bound on c^T w from some feasible point (makes the search finite);
// the caller guarantees c >= 0 on the feasible region directions.
struct BoxILP {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    std::vector<Rat> c;
    std::vector<long> lo;
    std::vector<std::optional<long>> hi;
};

inline LPResult box_lp(const BoxILP& p) {
    const int n = static_cast<int>(p.c.size());
    // substitute y_i = w_i - lo_i >= 0, add slack rows for upper bounds
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    int slacks = 0;
    for (int i = 0; i < n; ++i)
        if (p.hi[i]) ++slacks;
    const int cols = n + slacks;
    for (size_t r = 0; r < p.A.size(); ++r) {
        std::vector<Rat> row(cols, Rat(0));
        Rat rhs = p.b[r];
        for (int j = 0; j < n; ++j) {
            row[j] = p.A[r][j];
            rhs -= p.A[r][j] * Rat(p.lo[j]);
        }
        A.push_back(std::move(row));
        b.push_back(rhs);
    }
    int s = 0;
    for (int i = 0; i < n; ++i) {
        if (!p.hi[i]) continue;
        if (*p.hi[i] < p.lo[i]) return {LPStatus::Infeasible, {}, Rat(0)};
        std::vector<Rat> row(cols, Rat(0));
        row[i] = 1;
        row[n + s] = 1;
        A.push_back(std::move(row));
        b.push_back(Rat(*p.hi[i] - p.lo[i]));
        ++s;
    }
    std::vector<Rat> c(cols, Rat(0));
    for (int i = 0; i < n; ++i) c[i] = p.c[i];
    LPResult r = simplex_standard(std::move(A), std::move(b), std::move(c));
    if (r.status != LPStatus::Optimal) return r;
    LPResult out;
    out.status = LPStatus::Optimal;
    out.x.assign(n, Rat(0));
    out.value = 0;
    for (int i = 0; i < n; ++i) {
        out.x[i] = r.x[i] + Rat(p.lo[i]);
        out.value += p.c[i] * out.x[i];
    }
    return out;
}

inline void bb_search(BoxILP p, std::optional<Rat>& best_val, std::optional<std::vector<long>>& best,
                      int depth = 0) {
    if (depth > 256) throw InternalError("branch-and-bound depth exceeded");
    LPResult lp = box_lp(p);
    if (lp.status != LPStatus::Optimal) return;
    if (best_val && lp.value >= *best_val) return;
    int frac = -1;
    for (size_t i = 0; i < lp.x.size(); ++i)
        if (lp.x[i].get_den() != 1) {
            frac = static_cast<int>(i);
            break;
        }
    if (frac < 0) {
        std::vector<long> w(lp.x.size());
        for (size_t i = 0; i < lp.x.size(); ++i) w[i] = static_cast<long>(lp.x[i].get_num().get_si());
        best_val = lp.value;
        best = std::move(w);
        return;
    }
    mpz_class fl = lp.x[frac].get_num() / lp.x[frac].get_den();
    if (lp.x[frac] < 0 && lp.x[frac].get_den() != 1) fl -= 1; // floor for negatives
    long f = static_cast<long>(fl.get_si());
    BoxILP down = p;
    down.hi[frac] = p.hi[frac] ? std::min(*p.hi[frac], f) : f;
    bb_search(std::move(down), best_val, best, depth + 1);
    BoxILP up = p;
    up.lo[frac] = std::max(p.lo[frac], f + 1);
    bb_search(std::move(up), best_val, best, depth + 1);
}

inline std::optional<std::vector<long>> ilp_minimize(const BoxILP& p) {
    std::optional<Rat> best_val;
    std::optional<std::vector<long>> best;
    bb_search(p, best_val, best);
    return best;
}

} // namespace dgql::intlp
