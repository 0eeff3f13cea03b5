#pragma once

#include <deque>
#include <map>
#include <tuple>

#include "dgql/series.hpp"

namespace dgql {

struct TwoSidedIdeal {
    QuiverPtr q;
    Field field;
    long trunc = 1;
    std::vector<PathSeries> gens;

    TwoSidedIdeal(QuiverPtr quiv, Field f, long N, std::vector<PathSeries> g)
        : q(std::move(quiv)), field(f), trunc(N), gens(std::move(g)) {
        for (const auto& s : gens) {
            if (s.is_zero()) throw PreconditionError("zero ideal generator rejected");
            if (s.field() != field || !(*s.quiver() == *q))
                throw PreconditionError("ideal generator over a different quiver/field");
        }
    }
};

// Oriented rewriting rule lead -> tail (lead monic, tail < lead in monomial
// order). A trivial-path lead can only arise as e_v -> 0, since e_v is minimal
// in the order; it kills every path through v.
struct RewriteRule {
    Path lead;
    PathSeries tail;
};

namespace detail {

// First position where `sub` occurs as a factor of `word` (arrow index
// sequences), or -1. Trivial `sub` handled by the caller.
inline int find_subword(const std::vector<int>& word, const std::vector<int>& sub) {
    if (sub.empty() || sub.size() > word.size()) return sub.empty() ? 0 : -1;
    for (size_t i = 0; i + sub.size() <= word.size(); ++i) {
        bool ok = true;
        for (size_t k = 0; k < sub.size(); ++k)
            if (word[i + k] != sub[k]) {
                ok = false;
                break;
            }
        if (ok) return static_cast<int>(i);
    }
    return -1;
}

} // namespace detail

class TruncatedQuotient {
  public:
    TruncatedQuotient(QuiverPtr q, Field f, long N) : q_(std::move(q)), field_(f), trunc_(N) {
        killed_.assign(q_->vertices.size(), false);
    }

    const QuiverPtr& quiver() const { return q_; }
    const Field& field() const { return field_; }
    long trunc() const { return trunc_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    const std::vector<Path>& normal_monomials() const { return normals_; }
    const std::vector<bool>& killed_vertices() const { return killed_; }

    bool path_reducible(const Path& p) const {
        if (killed_[p.src]) return true;
        int at = p.src;
        for (int a : p.arrows) {
            at = q_->arrows[a].tgt;
            if (killed_[at]) return true;
        }
        for (const auto& r : rules_)
            if (!r.lead.is_trivial() && detail::find_subword(p.arrows, r.lead.arrows) >= 0) return true;
        return false;
    }

    // Total reduction to normal form (weights <= trunc).
    PathSeries reduce(PathSeries f) const {
        bool changed = true;
        while (changed) {
            changed = false;
            const auto& terms = f.terms();
            for (auto it = terms.rbegin(); it != terms.rend() && !changed; ++it) {
                const Path& p = it->first;
                const Scalar c = it->second;
                if (killed_[p.src] || [&] {
                        int at = p.src;
                        for (int a : p.arrows)
                            if (killed_[at = q_->arrows[a].tgt]) return true;
                        return false;
                    }()) {
                    f.add_term(p, -c);
                    changed = true;
                    break;
                }
                for (const auto& r : rules_) {
                    if (r.lead.is_trivial()) continue;
                    int pos = detail::find_subword(p.arrows, r.lead.arrows);
                    if (pos < 0) continue;
                    Path u{p.src, {p.arrows.begin(), p.arrows.begin() + pos}};
                    int vsrc = path_target(*q_, Path{p.src, {p.arrows.begin(),
                                                             p.arrows.begin() + pos +
                                                                 static_cast<long>(r.lead.length())}});
                    Path v{vsrc, {p.arrows.begin() + pos + static_cast<long>(r.lead.length()),
                                  p.arrows.end()}};
                    PathSeries um = PathSeries::monomial(q_, field_, trunc_, u, c);
                    PathSeries vm = PathSeries::monomial(q_, field_, trunc_, v);
                    f.add_term(p, -c);
                    f += um * r.tail * vm;
                    changed = true;
                    break;
                }
            }
        }
        return f;
    }

  private:
    friend TruncatedQuotient groebner_truncated(const TwoSidedIdeal& I, long N);

    void insert_rule(PathSeries f, std::deque<PathSeries>& queue) {
        f = reduce(std::move(f));
        if (f.is_zero()) return;
        const auto& [lead, c] = f.lead();
        PathSeries tail = (PathSeries::monomial(q_, field_, trunc_, lead, c) - f).scaled(c.inverse());
        if (lead.is_trivial()) {
            // e_v is minimal, so f = c*e_v and the rule is e_v -> 0
            killed_[lead.src] = true;
            std::vector<RewriteRule> keep;
            for (auto& r : rules_) {
                if (path_reducible(r.lead))
                    queue.push_back(PathSeries::monomial(q_, field_, trunc_, r.lead) - r.tail);
                else
                    keep.push_back(std::move(r));
            }
            rules_ = std::move(keep);
            return;
        }
        RewriteRule nr{lead, tail};
        // retire rules whose lead became reducible
        std::vector<RewriteRule> keep;
        for (auto& r : rules_) {
            if (detail::find_subword(r.lead.arrows, lead.arrows) >= 0)
                queue.push_back(PathSeries::monomial(q_, field_, trunc_, r.lead) - r.tail);
            else
                keep.push_back(std::move(r));
        }
        rules_ = std::move(keep);
        // overlap S-polynomials with every active rule (both sides, and self)
        rules_.push_back(nr);
        for (const auto& r : rules_) {
            enqueue_overlaps(nr, r, queue);
            if (!(path_cmp(*q_, r.lead, nr.lead) == 0)) enqueue_overlaps(r, nr, queue);
        }
        std::sort(rules_.begin(), rules_.end(), [this](const RewriteRule& a, const RewriteRule& b) {
            return path_cmp(*q_, a.lead, b.lead) < 0;
        });
    }

    // suffix of r1.lead of length k == prefix of r2.lead, 0 < k < both lengths
    void enqueue_overlaps(const RewriteRule& r1, const RewriteRule& r2,
                          std::deque<PathSeries>& queue) const {
        const auto& w1 = r1.lead.arrows;
        const auto& w2 = r2.lead.arrows;
        for (size_t k = 1; k < w1.size() && k < w2.size(); ++k) {
            bool match = true;
            for (size_t t = 0; t < k; ++t)
                if (w1[w1.size() - k + t] != w2[t]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            Path w = r1.lead;
            w.arrows.insert(w.arrows.end(), w2.begin() + static_cast<long>(k), w2.end());
            if (path_weight(*q_, w) > trunc_) continue;
            Path suffix{q_->arrows[w2[k - 1]].tgt, {w2.begin() + static_cast<long>(k), w2.end()}};
            Path prefix{r1.lead.src, {w1.begin(), w1.end() - static_cast<long>(k)}};
            PathSeries s = r1.tail * PathSeries::monomial(q_, field_, trunc_, suffix) -
                           PathSeries::monomial(q_, field_, trunc_, prefix) * r2.tail;
            if (!s.is_zero()) queue.push_back(std::move(s));
        }
    }

    void enumerate_normals() {
        normals_.clear();
        for (int v = 0; v < static_cast<int>(q_->vertices.size()); ++v) {
            if (killed_[v]) continue;
            Path p = Path::trivial(v);
            dfs_normals(p, 0);
        }
        std::sort(normals_.begin(), normals_.end(),
                  [this](const Path& a, const Path& b) { return path_cmp(*q_, a, b) < 0; });
    }

    void dfs_normals(Path& p, long w) {
        normals_.push_back(p);
        int at = path_target(*q_, p);
        for (size_t ai = 0; ai < q_->arrows.size(); ++ai) {
            const Arrow& a = q_->arrows[ai];
            if (a.src != at || w + a.weight > trunc_ || killed_[a.tgt]) continue;
            p.arrows.push_back(static_cast<int>(ai));
            bool reducible = false;
            for (const auto& r : rules_) {
                size_t len = r.lead.length();
                if (len == 0 || len > p.arrows.size()) continue;
                bool suffix = true;
                for (size_t t = 0; t < len; ++t)
                    if (p.arrows[p.arrows.size() - len + t] != r.lead.arrows[t]) {
                        suffix = false;
                        break;
                    }
                if (suffix) {
                    reducible = true;
                    break;
                }
            }
            if (!reducible) dfs_normals(p, w + a.weight);
            p.arrows.pop_back();
        }
    }

    QuiverPtr q_;
    Field field_;
    long trunc_;
    std::vector<RewriteRule> rules_;
    std::vector<bool> killed_;
    std::vector<Path> normals_;
};

// Completion: every S-polynomial overlap of weight <= N reduces to zero, so the
// normal monomials enumerate a basis of the quotient in each weight <= N.
inline TruncatedQuotient groebner_truncated(const TwoSidedIdeal& I, long N) {
    TruncatedQuotient qt(I.q, I.field, N);
    std::deque<PathSeries> queue;
    for (const auto& g : I.gens) queue.push_back(retruncate(g, N));
    while (!queue.empty()) {
        PathSeries f = std::move(queue.front());
        queue.pop_front();
        qt.insert_rule(std::move(f), queue);
    }
    // final tail interreduction (leads are mutually irreducible already)
    for (auto& r : qt.rules_) r.tail = qt.reduce(r.tail);
    qt.enumerate_normals();
    return qt;
}

struct DimTable {
    long trunc = 0;
    std::map<std::tuple<int, int, long>, long> by_block; // (src, tgt, weight) -> dim
    std::vector<long> by_weight;
    long total = 0;
    bool finite_flag = false; // heuristic: top ceil(N/2) weights all vanish
};

inline DimTable quotient_dims(const TruncatedQuotient& qt) {
    DimTable t;
    t.trunc = qt.trunc();
    t.by_weight.assign(qt.trunc() + 1, 0);
    const auto& q = *qt.quiver();
    for (const Path& p : qt.normal_monomials()) {
        long w = path_weight(q, p);
        ++t.by_block[{p.src, path_target(q, p), w}];
        ++t.by_weight[w];
        ++t.total;
    }
    long top = (qt.trunc() + 1) / 2;
    t.finite_flag = true;
    for (long w = qt.trunc() - top + 1; w <= qt.trunc(); ++w)
        if (w >= 0 && t.by_weight[w] != 0) t.finite_flag = false;
    return t;
}

} // namespace dgql
