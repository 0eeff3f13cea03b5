#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgql/errors.hpp"

namespace dgql {

struct Arrow {
    std::string name;
    int src = 0, tgt = 0;
    int degree = 0;
    int weight = 1; // positive; drives truncation
};

// Finite graded quiver. Immutable after make(); shared by pointer everywhere.
struct GradedQuiver {
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<int> lexrank; // lexrank[a] = rank of arrows[a].name among arrow names

    static std::shared_ptr<const GradedQuiver> make(std::vector<std::string> verts,
                                                    std::vector<Arrow> arrs) {
        GradedQuiver q;
        q.vertices = std::move(verts);
        q.arrows = std::move(arrs);
        std::map<std::string, int> vidx;
        for (size_t i = 0; i < q.vertices.size(); ++i) {
            if (!vidx.emplace(q.vertices[i], static_cast<int>(i)).second)
                throw PreconditionError("duplicate vertex name '" + q.vertices[i] + "'");
        }
        std::map<std::string, int> aidx;
        for (size_t i = 0; i < q.arrows.size(); ++i) {
            const Arrow& a = q.arrows[i];
            if (!aidx.emplace(a.name, static_cast<int>(i)).second)
                throw PreconditionError("duplicate arrow name '" + a.name + "'");
            if (a.src < 0 || a.src >= static_cast<int>(q.vertices.size()) || a.tgt < 0 ||
                a.tgt >= static_cast<int>(q.vertices.size()))
                throw PreconditionError("arrow '" + a.name + "' has a dangling endpoint");
            if (a.weight <= 0)
                throw PreconditionError("arrow '" + a.name + "' needs a positive weight");
        }
        q.lexrank.resize(q.arrows.size());
        int r = 0;
        for (const auto& [name, i] : aidx) {
            (void)name;
            q.lexrank[i] = r++;
        }
        return std::make_shared<const GradedQuiver>(std::move(q));
    }

    int vertex_index(const std::string& name) const {
        for (size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == name) return static_cast<int>(i);
        return -1;
    }
    int arrow_index(const std::string& name) const {
        for (size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].name == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const GradedQuiver& o) const {
        if (vertices != o.vertices || arrows.size() != o.arrows.size()) return false;
        for (size_t i = 0; i < arrows.size(); ++i) {
            const Arrow &a = arrows[i], &b = o.arrows[i];
            if (a.name != b.name || a.src != b.src || a.tgt != b.tgt || a.degree != b.degree ||
                a.weight != b.weight)
                return false;
        }
        return true;
    }
};

using QuiverPtr = std::shared_ptr<const GradedQuiver>;

// Path composed left to right: pq means "traverse p, then q". Trivial paths
// carry only their vertex.
struct Path {
    int src = 0;
    std::vector<int> arrows;

    static Path trivial(int v) { return Path{v, {}}; }
    bool is_trivial() const { return arrows.empty(); }
    size_t length() const { return arrows.size(); }

    bool operator==(const Path& o) const {
        return arrows == o.arrows && (arrows.empty() ? src == o.src : src == o.src);
    }
};

inline int path_target(const GradedQuiver& q, const Path& p) {
    return p.arrows.empty() ? p.src : q.arrows[p.arrows.back()].tgt;
}
inline int path_degree(const GradedQuiver& q, const Path& p) {
    int d = 0;
    for (int a : p.arrows) d += q.arrows[a].degree;
    return d;
}
inline long path_weight(const GradedQuiver& q, const Path& p) {
    long w = 0;
    for (int a : p.arrows) w += q.arrows[a].weight;
    return w;
}
// Weight under an explicit per-arrow assignment.
inline long path_weight(const std::vector<long>& w, const Path& p) {
    long s = 0;
    for (int a : p.arrows) s += w[a];
    return s;
}

inline bool path_valid(const GradedQuiver& q, const Path& p) {
    int at = p.src;
    for (int a : p.arrows) {
        if (a < 0 || a >= static_cast<int>(q.arrows.size()) || q.arrows[a].src != at) return false;
        at = q.arrows[a].tgt;
    }
    return true;
}

inline Path compose_paths(const GradedQuiver& q, const Path& p, const Path& r) {
    if (path_target(q, p) != r.src)
        throw PreconditionError("paths are not composable: target(p) != source(q)");
    Path out = p;
    if (out.arrows.empty()) out.src = p.src;
    out.arrows.insert(out.arrows.end(), r.arrows.begin(), r.arrows.end());
    return out;
}

// Monomial order: weight, then length, then lex on arrow names, with trivial
// paths ordered by vertex name. Returns <0, 0, >0.
inline int path_cmp(const GradedQuiver& q, const Path& a, const Path& b) {
    long wa = path_weight(q, a), wb = path_weight(q, b);
    if (wa != wb) return wa < wb ? -1 : 1;
    if (a.length() != b.length()) return a.length() < b.length() ? -1 : 1;
    for (size_t i = 0; i < a.length(); ++i) {
        int ra = q.lexrank[a.arrows[i]], rb = q.lexrank[b.arrows[i]];
        if (ra != rb) return ra < rb ? -1 : 1;
    }
    if (a.is_trivial() && b.is_trivial()) {
        if (a.src != b.src) return q.vertices[a.src] < q.vertices[b.src] ? -1 : 1;
        return 0;
    }
    if (a.src != b.src) return a.src < b.src ? -1 : 1; // parallel-free safety; equal words share src
    return 0;
}

inline std::string path_to_string(const GradedQuiver& q, const Path& p) {
    if (p.is_trivial()) return "e_" + q.vertices[p.src];
    std::string s;
    for (size_t i = 0; i < p.arrows.size(); ++i) {
        if (i) s += " ";
        s += q.arrows[p.arrows[i]].name;
    }
    return s;
}

// ---- walks and trees ---------------------------------------------------

struct WalkStep {
    int arrow = 0;
    bool forward = true; // false: formal inverse
};

struct Walk {
    std::vector<WalkStep> steps;
    bool empty() const { return steps.empty(); }
};

struct TreeReport {
    bool forest = false;
    std::vector<std::vector<int>> components; // vertex indices
    std::vector<bool> component_acyclic;
};

inline TreeReport tree_report(const GradedQuiver& q) {
    int n = static_cast<int>(q.vertices.size());
    std::vector<int> comp(n, -1);
    TreeReport rep;
    rep.forest = true;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        int c = static_cast<int>(rep.components.size());
        std::vector<int> verts, stack{start};
        comp[start] = c;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            verts.push_back(v);
            for (const Arrow& a : q.arrows) {
                int other = -1;
                if (a.src == v) other = a.tgt;
                else if (a.tgt == v) other = a.src;
                else continue;
                if (comp[other] < 0) {
                    comp[other] = c;
                    stack.push_back(other);
                }
            }
        }
        std::sort(verts.begin(), verts.end());
        int edges = 0;
        for (const Arrow& a : q.arrows)
            if (comp[a.src] == c) ++edges;
        // a connected multigraph is acyclic iff #edges = #vertices - 1
        bool acyclic = edges == static_cast<int>(verts.size()) - 1;
        rep.components.push_back(std::move(verts));
        rep.component_acyclic.push_back(acyclic);
        if (!acyclic) rep.forest = false;
    }
    return rep;
}

inline bool is_tree(const GradedQuiver& q) { return tree_report(q).forest; }

// Unique reduced walk j -> i in the underlying forest; nullopt across components.
inline std::optional<Walk> unique_walk(const GradedQuiver& q, int j, int i) {
    if (!is_tree(q)) throw PreconditionError("unique_walk requires a tree quiver");
    int n = static_cast<int>(q.vertices.size());
    std::vector<int> prev_vertex(n, -1);
    std::vector<WalkStep> prev_step(n);
    std::vector<bool> seen(n, false);
    std::vector<int> queue{j};
    seen[j] = true;
    for (size_t h = 0; h < queue.size(); ++h) {
        int v = queue[h];
        for (size_t ai = 0; ai < q.arrows.size(); ++ai) {
            const Arrow& a = q.arrows[ai];
            int other;
            bool forward;
            if (a.src == v) {
                other = a.tgt;
                forward = true;
            } else if (a.tgt == v) {
                other = a.src;
                forward = false;
            } else
                continue;
            if (seen[other]) continue;
            seen[other] = true;
            prev_vertex[other] = v;
            prev_step[other] = WalkStep{static_cast<int>(ai), forward};
            queue.push_back(other);
        }
    }
    if (!seen[i]) return std::nullopt;
    Walk w;
    for (int v = i; v != j; v = prev_vertex[v]) w.steps.push_back(prev_step[v]);
    std::reverse(w.steps.begin(), w.steps.end());
    return w;
}

} // namespace dgql
