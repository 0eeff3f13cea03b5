#pragma once

#include <fstream>
#include <sstream>

#include "dgql/barkoszul.hpp"
#include "dgql/dgalg.hpp"
#include "dgql/ginzburg.hpp"

namespace dgql {

// One declaration per line, '#' starts a comment, tokens whitespace-separated.
// Shared line types across the input formats:
//   field rational | field prime <p>
//   vertex <name>
//   arrow <name> <src> <tgt> <deg> [<weight>]
//   term <coeff> <arrow>...                          (potential files)
//   d <arrow> = <coeff> <arrow>... [+ ...] | 0       (dg files)
//   basis <name> <deg> <srcIdem> <tgtIdem>           (augmented files)
//   m2 <a> <b> = <coeff> <c> [+ ...] | 0
//   mN <n> <a1> ... <an> = <coeff> <c> [+ ...] | 0
//   relation <coeff> <arrow>... [+ ...]              (algebra files)
//   module <name> / dim <vertex> <n> / map <arrow> <entries...>   (module files)
//   twist <arrow> <lambda> <mu>                      (tree twist files)
struct ParsedInput {
    Field field = Field::rationals();
    QuiverPtr quiver;
    long trunc = 8;

    bool has_terms = false, has_d = false, has_basis = false, has_relations = false,
         has_modules = false, has_twists = false;

    std::optional<Potential> potential;
    std::optional<DGQuiverAlgebra> dg;
    std::shared_ptr<const AugmentedAlgebra> augmented;
    std::vector<PathSeries> relations;
    std::vector<Scalar> lambda, mu; // per arrow; default 1

    struct ModuleData {
        std::map<std::string, int> dims;       // vertex name -> dim
        std::map<std::string, std::vector<Scalar>> maps; // arrow name -> row-major entries
        int decl_line = 0;
    };
    std::vector<std::pair<std::string, ModuleData>> modules;
};

namespace iodetail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
        if (ch == '#') break;
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
        } else
            cur += ch;
    }
    if (!cur.empty()) toks.push_back(std::move(cur));
    return toks;
}

inline bool valid_ident(const std::string& s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto alnum = [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); };
    for (size_t i = 0; i < s.size(); ++i)
        if (!(i ? alnum(s[i]) : alnum(s[i]))) return false; // digits allowed first (vertex "1")
    return true;
}

inline long parse_int(const std::string& tok, int line, const char* what) {
    try {
        size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(std::string("expected ") + what + ", got '" + tok + "'", line);
    }
}

// Splits "<coeff> <name>... [+ <coeff> <name>...]*" into (coeff, names) groups;
// a single literal "0" means the zero combination.
inline std::vector<std::pair<std::string, std::vector<std::string>>> parse_combination(
    const std::vector<std::string>& toks, size_t from, int line) {
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    if (from >= toks.size()) throw ParseError("empty right-hand side", line);
    if (toks.size() == from + 1 && toks[from] == "0") return groups;
    size_t i = from;
    while (i < toks.size()) {
        std::string coeff = toks[i++];
        std::vector<std::string> names;
        while (i < toks.size() && toks[i] != "+") names.push_back(toks[i++]);
        groups.emplace_back(std::move(coeff), std::move(names));
        if (i < toks.size()) {
            ++i; // skip '+'
            if (i == toks.size()) throw ParseError("dangling '+'", line);
        }
    }
    return groups;
}

} // namespace iodetail

inline ParsedInput parse_input(std::istream& in, long trunc) {
    using namespace iodetail;
    ParsedInput out;
    out.trunc = trunc;

    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::map<std::string, int> vidx, aidx;
    bool field_seen = false;

    struct RawCombo {
        std::vector<std::pair<std::string, std::vector<std::string>>> groups;
        int line;
    };
    std::vector<std::pair<std::pair<std::string, int>, RawCombo>> d_lines; // (arrow, line)
    std::vector<RawCombo> term_lines, relation_lines;
    std::vector<AugBasisElem> aug_basis;
    std::map<std::string, int> bidx;
    std::vector<std::pair<std::vector<std::string>, RawCombo>> m_lines;
    std::map<std::string, std::pair<std::string, std::string>> twist_lines;
    ParsedInput::ModuleData* cur_module = nullptr;

    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& tag = toks[0];
        auto need = [&](size_t n) {
            if (toks.size() < n) throw ParseError("too few tokens for '" + tag + "'", ln);
        };
        if (tag == "field") {
            need(2);
            if (field_seen) throw ParseError("duplicate field line", ln);
            field_seen = true;
            if (toks[1] == "rational") {
                if (toks.size() != 2) throw ParseError("trailing tokens after 'field rational'", ln);
                out.field = Field::rationals();
            } else if (toks[1] == "prime") {
                need(3);
                long p = parse_int(toks[2], ln, "a prime");
                try {
                    out.field = Field::prime(p);
                } catch (const PreconditionError& e) {
                    throw PreconditionError(e.what(), ln);
                }
            } else
                throw ParseError("unknown field kind '" + toks[1] + "'", ln);
        } else if (tag == "vertex") {
            need(2);
            if (toks.size() != 2) throw ParseError("vertex takes one name", ln);
            if (!valid_ident(toks[1])) throw ParseError("bad vertex name '" + toks[1] + "'", ln);
            if (!vidx.emplace(toks[1], static_cast<int>(vertices.size())).second)
                throw PreconditionError("duplicate vertex '" + toks[1] + "'", ln);
            vertices.push_back(toks[1]);
        } else if (tag == "arrow") {
            need(5);
            if (toks.size() > 6) throw ParseError("too many tokens for arrow", ln);
            if (!valid_ident(toks[1])) throw ParseError("bad arrow name '" + toks[1] + "'", ln);
            auto sv = vidx.find(toks[2]), tv = vidx.find(toks[3]);
            if (sv == vidx.end()) throw PreconditionError("unknown vertex '" + toks[2] + "'", ln);
            if (tv == vidx.end()) throw PreconditionError("unknown vertex '" + toks[3] + "'", ln);
            long deg = parse_int(toks[4], ln, "a degree");
            long wt = toks.size() == 6 ? parse_int(toks[5], ln, "a weight") : 1;
            if (wt <= 0) throw PreconditionError("arrow weight must be positive", ln);
            if (!aidx.emplace(toks[1], static_cast<int>(arrows.size())).second)
                throw PreconditionError("duplicate arrow '" + toks[1] + "'", ln);
            arrows.push_back(Arrow{toks[1], sv->second, tv->second, static_cast<int>(deg),
                                   static_cast<int>(wt)});
        } else if (tag == "term") {
            need(2);
            out.has_terms = true;
            term_lines.push_back(RawCombo{{{toks[1], {toks.begin() + 2, toks.end()}}}, ln});
        } else if (tag == "d") {
            need(4);
            if (toks[2] != "=") throw ParseError("expected '=' after the arrow name", ln);
            out.has_d = true;
            d_lines.push_back({{toks[1], ln}, RawCombo{parse_combination(toks, 3, ln), ln}});
        } else if (tag == "basis") {
            need(5);
            out.has_basis = true;
            if (!valid_ident(toks[1])) throw ParseError("bad basis name '" + toks[1] + "'", ln);
            auto sv = vidx.find(toks[3]), tv = vidx.find(toks[4]);
            if (sv == vidx.end()) throw PreconditionError("unknown idempotent '" + toks[3] + "'", ln);
            if (tv == vidx.end()) throw PreconditionError("unknown idempotent '" + toks[4] + "'", ln);
            if (!bidx.emplace(toks[1], static_cast<int>(aug_basis.size())).second)
                throw PreconditionError("duplicate basis name '" + toks[1] + "'", ln);
            aug_basis.push_back(AugBasisElem{toks[1], static_cast<int>(parse_int(toks[2], ln, "a degree")),
                                             sv->second, tv->second});
        } else if (tag == "m2" || tag == "mN") {
            out.has_basis = true;
            std::vector<std::string> chain;
            size_t at = 1;
            if (tag == "m2") {
                need(5);
                chain = {toks[1], toks[2]};
                at = 3;
            } else {
                need(3);
                long n = parse_int(toks[1], ln, "an arity");
                if (n < 1) throw ParseError("arity must be >= 1", ln);
                if (toks.size() < 2 + static_cast<size_t>(n) + 2)
                    throw ParseError("too few tokens for mN", ln);
                for (long i = 0; i < n; ++i) chain.push_back(toks[2 + i]);
                at = 2 + n;
            }
            if (toks[at] != "=") throw ParseError("expected '='", ln);
            m_lines.push_back({chain, RawCombo{parse_combination(toks, at + 1, ln), ln}});
        } else if (tag == "relation") {
            need(2);
            out.has_relations = true;
            relation_lines.push_back(RawCombo{parse_combination(toks, 1, ln), ln});
        } else if (tag == "module") {
            need(2);
            if (toks.size() != 2) throw ParseError("module takes one name", ln);
            out.has_modules = true;
            out.modules.emplace_back(toks[1], ParsedInput::ModuleData{});
            out.modules.back().second.decl_line = ln;
            cur_module = &out.modules.back().second;
        } else if (tag == "dim") {
            need(3);
            if (!cur_module) throw ParseError("dim line outside a module block", ln);
            if (vidx.find(toks[1]) == vidx.end())
                throw PreconditionError("unknown vertex '" + toks[1] + "'", ln);
            long d = parse_int(toks[2], ln, "a dimension");
            if (d < 0) throw PreconditionError("negative dimension", ln);
            cur_module->dims[toks[1]] = static_cast<int>(d);
        } else if (tag == "map") {
            need(2);
            if (!cur_module) throw ParseError("map line outside a module block", ln);
            if (aidx.find(toks[1]) == aidx.end())
                throw PreconditionError("unknown arrow '" + toks[1] + "'", ln);
            std::vector<Scalar> entries;
            for (size_t i = 2; i < toks.size(); ++i) entries.push_back(parse_scalar(out.field, toks[i]));
            cur_module->maps[toks[1]] = std::move(entries);
        } else if (tag == "twist") {
            need(4);
            out.has_twists = true;
            if (aidx.find(toks[1]) == aidx.end())
                throw PreconditionError("unknown arrow '" + toks[1] + "'", ln);
            twist_lines[toks[1]] = {toks[2], toks[3]};
        } else {
            throw ParseError("unknown declaration '" + tag + "'", ln);
        }
    }

    if (!vertices.empty() || !arrows.empty()) out.quiver = GradedQuiver::make(vertices, arrows);

    auto resolve_path = [&](const std::vector<std::string>& names, int line) -> Path {
        if (!out.quiver) throw PreconditionError("no quiver declared", line);
        if (names.empty()) throw ParseError("a path needs at least one arrow", line);
        std::vector<int> idx;
        for (const auto& nm : names) {
            auto it = aidx.find(nm);
            if (it == aidx.end()) throw PreconditionError("unknown arrow '" + nm + "'", line);
            idx.push_back(it->second);
        }
        Path p{out.quiver->arrows[idx[0]].src, idx};
        if (!path_valid(*out.quiver, p))
            throw PreconditionError("arrows do not compose left-to-right", line);
        return p;
    };
    auto combo_to_series = [&](const RawCombo& rc, int expect_src, int expect_tgt,
                               bool allow_trivial) -> PathSeries {
        PathSeries s = PathSeries::zero(out.quiver, out.field, trunc);
        for (const auto& [ctok, names] : rc.groups) {
            Scalar c = parse_scalar(out.field, ctok);
            Path p = names.empty() ? Path::trivial(expect_src) : resolve_path(names, rc.line);
            if (names.empty() && !allow_trivial)
                throw PreconditionError("trivial path not allowed here", rc.line);
            if (names.empty() && expect_src != expect_tgt)
                throw PreconditionError("trivial term needs equal endpoints", rc.line);
            if (expect_src >= 0 &&
                (p.src != expect_src || path_target(*out.quiver, p) != expect_tgt))
                throw PreconditionError("term endpoints do not match", rc.line);
            if (path_weight(*out.quiver, p) > trunc)
                throw PreconditionError("term weight exceeds truncation " + std::to_string(trunc),
                                        rc.line);
            s.add_term(std::move(p), c);
        }
        return s;
    };

    if (out.has_terms) {
        std::vector<std::pair<Scalar, Path>> terms;
        for (const auto& rc : term_lines) {
            const auto& [ctok, names] = rc.groups[0];
            Scalar c = parse_scalar(out.field, ctok);
            Path p = resolve_path(names, rc.line);
            if (p.src != path_target(*out.quiver, p))
                throw PreconditionError("potential term is not a cycle", rc.line);
            terms.emplace_back(c, std::move(p));
        }
        try {
            out.potential = Potential::make(out.quiver, out.field, trunc, std::move(terms));
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string("potential: ") + e.what());
        }
    }
    if (out.has_d || (out.quiver && !out.has_terms && !out.has_relations && !out.has_basis &&
                      !out.has_modules && !out.has_twists)) {
        // dg files; arrows without a d-line get d = 0
        std::vector<PathSeries> d(arrows.size(), PathSeries::zero(out.quiver, out.field, trunc));
        std::vector<bool> seen(arrows.size(), false);
        for (const auto& [head, rc] : d_lines) {
            auto it = aidx.find(head.first);
            if (it == aidx.end())
                throw PreconditionError("unknown arrow '" + head.first + "'", head.second);
            if (seen[it->second])
                throw PreconditionError("duplicate d-line for '" + head.first + "'", head.second);
            seen[it->second] = true;
            const Arrow& a = arrows[it->second];
            PathSeries s = combo_to_series(rc, a.src, a.tgt, a.degree == -1);
            for (const auto& [p, c] : s.terms())
                if (path_degree(*out.quiver, p) != a.degree + 1)
                    throw PreconditionError("d(" + a.name + ") term has wrong degree", rc.line);
            d[it->second] = std::move(s);
        }
        if (out.quiver) out.dg = DGQuiverAlgebra::make(out.quiver, out.field, trunc, std::move(d));
    }
    if (out.has_basis) {
        std::vector<MEntry> entries;
        for (const auto& [chain_names, rc] : m_lines) {
            std::vector<int> chain;
            for (const auto& nm : chain_names) {
                auto it = bidx.find(nm);
                if (it == bidx.end())
                    throw PreconditionError("unknown basis element '" + nm + "'", rc.line);
                chain.push_back(it->second);
            }
            std::vector<std::pair<int, Scalar>> val;
            for (const auto& [ctok, names] : rc.groups) {
                if (names.size() != 1)
                    throw PreconditionError("m-line values are single basis elements", rc.line);
                auto it = bidx.find(names[0]);
                if (it == bidx.end())
                    throw PreconditionError("unknown basis element '" + names[0] + "'", rc.line);
                val.emplace_back(it->second, parse_scalar(out.field, ctok));
            }
            entries.push_back(MEntry{std::move(chain), std::move(val)});
        }
        try {
            out.augmented = std::make_shared<const AugmentedAlgebra>(
                AugmentedAlgebra::make(out.field, vertices, aug_basis, std::move(entries)));
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string("augmented algebra: ") + e.what());
        }
    }
    if (out.has_relations) {
        for (const auto& rc : relation_lines) {
            PathSeries s = combo_to_series(rc, -1, -1, false);
            if (s.is_zero()) throw PreconditionError("relation reduces to zero", rc.line);
            out.relations.push_back(std::move(s));
        }
    }
    if (out.quiver) {
        out.lambda.assign(arrows.size(), Scalar::one(out.field));
        out.mu.assign(arrows.size(), Scalar::one(out.field));
        for (const auto& [name, lm] : twist_lines) {
            int a = aidx.at(name);
            out.lambda[a] = parse_scalar(out.field, lm.first);
            out.mu[a] = parse_scalar(out.field, lm.second);
            if (out.lambda[a].is_zero() || out.mu[a].is_zero())
                throw PreconditionError("zero twist for arrow '" + name + "'");
        }
    }
    return out;
}

inline ParsedInput parse_file(const std::string& path, long trunc) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_input(in, trunc);
}

// ---- emission ------------------------------------------------------------

inline std::string series_to_grammar(const PathSeries& s) {
    if (s.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [p, c] : s.terms()) {
        if (!first) out += " + ";
        first = false;
        out += c.to_string();
        for (int a : p.arrows) out += " " + s.quiver()->arrows[a].name;
    }
    return out;
}

// Deterministic .dgq text for a dg-quiver algebra (round-trips through the parser).
inline std::string emit_dgq(const DGQuiverAlgebra& A) {
    std::ostringstream os;
    os << "field " << (A.field.kind == FieldKind::Rational ? "rational"
                                                           : "prime " + std::to_string(A.field.p))
       << "\n";
    for (const auto& v : A.q->vertices) os << "vertex " << v << "\n";
    for (const auto& a : A.q->arrows) {
        os << "arrow " << a.name << " " << A.q->vertices[a.src] << " " << A.q->vertices[a.tgt]
           << " " << a.degree;
        if (a.weight != 1) os << " " << a.weight;
        os << "\n";
    }
    for (size_t i = 0; i < A.d.size(); ++i)
        if (!A.d[i].is_zero())
            os << "d " << A.q->arrows[i].name << " = " << series_to_grammar(A.d[i]) << "\n";
    return os.str();
}

} // namespace dgql
