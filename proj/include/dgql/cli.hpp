#pragma once

#include <iomanip>
#include <random>

#include "dgql/frobenius.hpp"
#include "dgql/io.hpp"
#include "dgql/trivext.hpp"

namespace dgql {

struct JobSpec {
    std::string command;
    std::vector<std::string> inputs; // file paths
    std::vector<std::string> args;   // module names
    long trunc = 8;
    std::optional<std::pair<int, int>> degrees;
    bool machine = false;
    long seed = 0;
    int cy_d = 2;
    std::optional<int> shift_n;
};

namespace clidetail {

// Report printed either as fixed human lines or sorted key=value lines.
struct Report {
    std::vector<std::string> lines;
    std::map<std::string, std::string> kv;

    void line(const std::string& s) { lines.push_back(s); }
    void put(const std::string& k, const std::string& v) { kv[k] = v; }
    void put(const std::string& k, long v) { kv[k] = std::to_string(v); }

    void print(bool machine, std::ostream& out) const {
        if (machine)
            for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
        else
            for (const auto& s : lines) out << s << "\n";
    }
};

inline const ParsedInput require_dg(const JobSpec& job) {
    if (job.inputs.size() != 1) throw PreconditionError(job.command + " takes one input file");
    ParsedInput in = parse_file(job.inputs[0], job.trunc);
    if (!in.dg) throw PreconditionError("input is not a dg-quiver algebra file");
    return in;
}

inline Path random_path(const GradedQuiver& q, std::mt19937_64& rng, int maxlen) {
    std::uniform_int_distribution<int> vd(0, static_cast<int>(q.vertices.size()) - 1);
    Path p = Path::trivial(vd(rng));
    std::uniform_int_distribution<int> ld(0, maxlen);
    int len = ld(rng);
    for (int i = 0; i < len; ++i) {
        std::vector<int> outs;
        for (size_t a = 0; a < q.arrows.size(); ++a)
            if (q.arrows[a].src == path_target(q, p)) outs.push_back(static_cast<int>(a));
        if (outs.empty()) break;
        std::uniform_int_distribution<size_t> ad(0, outs.size() - 1);
        p.arrows.push_back(outs[ad(rng)]);
    }
    return p;
}

inline PathSeries random_series(const DGQuiverAlgebra& A, std::mt19937_64& rng) {
    PathSeries s = PathSeries::zero(A.q, A.field, A.trunc);
    std::uniform_int_distribution<int> nd(1, 3), cd(-3, 3);
    int n = nd(rng);
    for (int i = 0; i < n; ++i) {
        int c = cd(rng);
        if (c == 0) c = 1;
        s.add_term(random_path(*A.q, rng, 4), Scalar::from_int(A.field, c));
    }
    return s;
}

} // namespace clidetail

// Dispatches one parsed job; returns the exit code (0 ok / 1 verification
// failed). Parse and precondition failures escape as exceptions and map to
// exit codes 2 and 3.
inline int run_job(const JobSpec& job, std::ostream& out, std::ostream& err) {
    using clidetail::Report;

    if (job.command == "d2check") {
        ParsedInput in = clidetail::require_dg(job);
        const DGQuiverAlgebra& A = *in.dg;
        D2Report rep = check_d_squared(A);
        Report r;
        r.put("command", "d2check");
        r.put("trunc", job.trunc);
        r.put("pass", rep.pass ? "true" : "false");
        if (rep.pass) {
            r.line("d2check: PASS (all arrows, weights <= " + std::to_string(job.trunc) + ")");
        } else {
            r.line("d2check: FAIL");
            r.line("arrow: " + rep.arrow);
            r.line("weight: " + std::to_string(rep.weight));
            r.line("block: " + rep.block);
            r.put("arrow", rep.arrow);
            r.put("weight", rep.weight);
            r.put("block", rep.block);
        }
        bool audit_ok = true;
        if (job.seed != 0 && rep.pass) {
            std::mt19937_64 rng(static_cast<uint64_t>(job.seed));
            const int count = 200;
            for (int i = 0; i < count && audit_ok; ++i) {
                PathSeries f = clidetail::random_series(A, rng);
                PathSeries g = clidetail::random_series(A, rng);
                audit_ok = extend_leibniz(A, extend_leibniz(A, f * g)).is_zero();
            }
            r.line(std::string("random-products: ") + (audit_ok ? "PASS" : "FAIL") + " (" +
                   std::to_string(count) + " products, seed " + std::to_string(job.seed) + ")");
            r.put("random_products", audit_ok ? "pass" : "fail");
            r.put("seed", job.seed);
        }
        r.print(job.machine, out);
        return rep.pass && audit_ok ? 0 : 1;
    }

    if (job.command == "cohomology") {
        ParsedInput in = clidetail::require_dg(job);
        const DGQuiverAlgebra& A = *in.dg;
        D2Report d2 = check_d_squared(A);
        if (!d2.pass)
            throw PreconditionError("d^2 != 0 at arrow " + d2.arrow + "; refusing cohomology");
        int lo, hi;
        if (job.degrees) {
            lo = job.degrees->first;
            hi = job.degrees->second;
        } else {
            int mind = 0, maxd = 0;
            for (const auto& a : A.q->arrows) {
                mind = std::min(mind, a.degree);
                maxd = std::max(maxd, a.degree);
            }
            lo = mind - 1;
            hi = maxd + 1;
        }
        CohomTable tab = cohomology_dims(A, lo, hi, job.trunc);
        Report r;
        r.put("command", "cohomology");
        r.put("trunc", job.trunc);
        r.put("degrees", std::to_string(lo) + ".." + std::to_string(hi));
        r.put("exact", tab.exact ? "true" : "false");
        if (tab.exact) {
            std::string g;
            for (size_t a = 0; a < A.q->arrows.size(); ++a) {
                if (a) g += " ";
                g += A.q->arrows[a].name + "=" + std::to_string(tab.grading->w[a]);
                r.put("grading." + A.q->arrows[a].name, tab.grading->w[a]);
            }
            r.line("grading: exact (" + g + ")");
        } else {
            r.line("grading: approximate at truncation " + std::to_string(job.trunc));
        }
        for (int p = lo; p <= hi; ++p) {
            long total = 0;
            std::vector<std::string> rows;
            for (const auto& [key, dim] : tab.dims) {
                auto [deg, w, s, t] = key;
                if (deg != p) continue;
                total += dim;
                rows.push_back("H^" + std::to_string(p) + " [" + A.q->vertices[s] + "->" +
                               A.q->vertices[t] + "] w=" + std::to_string(w) + ": " +
                               std::to_string(dim));
                r.put("h." + std::to_string(p) + ".w" + std::to_string(w) + "." +
                          A.q->vertices[s] + "." + A.q->vertices[t],
                      dim);
            }
            if (rows.empty()) {
                r.line("H^" + std::to_string(p) + ": 0 for all weights <= " +
                       std::to_string(job.trunc));
            } else {
                for (const auto& s : rows) r.line(s);
                r.line("H^" + std::to_string(p) + " total: " + std::to_string(total));
            }
            r.put("total." + std::to_string(p), total);
        }
        r.print(job.machine, out);
        return 0;
    }

    if (job.command == "jacobian") {
        if (job.inputs.size() != 1) throw PreconditionError("jacobian takes one input file");
        ParsedInput in = parse_file(job.inputs[0], job.trunc);
        if (!in.potential) throw PreconditionError("input is not a potential file");
        JacobianReport rep = jacobian(*in.potential, job.trunc);
        for (const auto& name : rep.vanished_derivatives)
            err << "warning: cyclic derivative of " << name << " vanishes identically\n";
        Report r;
        r.put("command", "jacobian");
        r.put("trunc", job.trunc);
        for (long w = 0; w < static_cast<long>(rep.dims.by_weight.size()); ++w) {
            if (rep.dims.by_weight[w] == 0) continue;
            r.line("weight " + std::to_string(w) + ": " + std::to_string(rep.dims.by_weight[w]));
            r.put("weight." + std::to_string(w), rep.dims.by_weight[w]);
        }
        r.line("total: " + std::to_string(rep.dims.total) + " (finite: " +
               (rep.dims.finite_flag ? "likely" : "unknown") + ")");
        r.line("crosscheck: " + rep.h0_crosscheck);
        r.put("total", rep.dims.total);
        r.put("finite", rep.dims.finite_flag ? "likely" : "unknown");
        r.put("crosscheck", rep.h0_crosscheck);
        r.print(job.machine, out);
        return 0;
    }

    if (job.command == "ginzburg" || job.command == "dualbar") {
        if (job.inputs.size() != 1) throw PreconditionError(job.command + " takes one input file");
        ParsedInput in = parse_file(job.inputs[0], job.trunc);
        DGQuiverAlgebra dg;
        if (job.command == "ginzburg") {
            if (!in.potential) throw PreconditionError("input is not a potential file");
            dg = ginzburg_dg(*in.potential).dg;
        } else {
            if (!in.augmented) throw PreconditionError("input is not an augmented-algebra file");
            dg = dual_bar(*in.augmented, job.trunc).dg;
        }
        if (!job.machine) {
            out << emit_dgq(dg);
        } else {
            Report r;
            r.put("command", job.command);
            r.put("vertices", static_cast<long>(dg.q->vertices.size()));
            r.put("arrows", static_cast<long>(dg.q->arrows.size()));
            for (size_t a = 0; a < dg.q->arrows.size(); ++a) {
                const Arrow& ar = dg.q->arrows[a];
                r.put("arrow." + ar.name, dg.q->vertices[ar.src] + "," + dg.q->vertices[ar.tgt] +
                                              "," + std::to_string(ar.degree));
                if (!dg.d[a].is_zero()) r.put("d." + ar.name, series_to_grammar(dg.d[a]));
            }
            r.print(true, out);
        }
        return 0;
    }

    if (job.command == "bar") {
        if (job.inputs.size() != 1) throw PreconditionError("bar takes one input file");
        ParsedInput in = parse_file(job.inputs[0], job.trunc);
        if (!in.augmented) throw PreconditionError("input is not an augmented-algebra file");
        BarComplex bc = bar_complex(in.augmented, job.trunc);
        Report r;
        r.put("command", "bar");
        r.put("trunc", job.trunc);
        for (long n = 0; n <= bc.L(); ++n) {
            r.line("length " + std::to_string(n) + ": dim " +
                   std::to_string(bc.chains(n).size()));
            r.put("length." + std::to_string(n), static_cast<long>(bc.chains(n).size()));
        }
        std::string what;
        bool d2 = bar_d_squared_ok(bc, &what);
        r.line(std::string("d2: ") + (d2 ? "PASS" : "FAIL at " + what));
        r.put("d2", d2 ? "pass" : "fail");
        bool cod = bar_coderivation_ok(bc, &what);
        r.line(std::string("coderivation: ") + (cod ? "PASS" : "FAIL at " + what));
        r.put("coderivation", cod ? "pass" : "fail");
        r.print(job.machine, out);
        return d2 && cod ? 0 : 1;
    }

    if (job.command == "trivext-iso" || job.command == "cy-check") {
        if (job.inputs.size() != 1) throw PreconditionError(job.command + " takes one input file");
        ParsedInput in = parse_file(job.inputs[0], job.trunc);
        if (!in.quiver) throw PreconditionError("input declares no quiver");
        if (!is_tree(*in.quiver)) throw PreconditionError("quiver is not a tree");
        RadSquareZero R = RadSquareZero::make(in.quiver, in.field);
        TwistedDual M = twisted_dual(R, in.lambda, in.mu);
        TrivialExtension A = trivial_extension(R, M, job.cy_d);
        Report r;
        if (job.command == "cy-check") {
            CySymReport rep = cy_symmetry_check(A);
            r.put("command", "cy-check");
            r.put("d", static_cast<long>(job.cy_d));
            r.put("cy", rep.pass ? "pass" : "fail");
            r.line(std::string("cy: ") + (rep.pass ? "PASS" : "FAIL") + " (d=" +
                   std::to_string(job.cy_d) + ")");
            if (!rep.pass) {
                r.line("violation: " + rep.first_violation);
                r.put("violation", rep.first_violation);
            }
            for (const auto& [i, j, p, a, b] : rep.table) {
                (void)b;
                if (a != 0)
                    r.put("dim." + A.q->vertices[i] + "." + A.q->vertices[j] + "." +
                              std::to_string(p),
                          a);
            }
            r.print(job.machine, out);
            return rep.pass ? 0 : 1;
        }
        std::vector<Scalar> ones(in.quiver->arrows.size(), Scalar::one(in.field));
        TrivialExtension B = trivial_extension(R, twisted_dual(R, ones, ones), job.cy_d);
        Matrix phi = walk_rescale_iso(A);
        IsoReport rep = verify_iso(phi, A, B);
        r.put("command", "trivext-iso");
        r.put("iso", rep.pass ? "pass" : "fail");
        r.line(std::string("iso: ") + (rep.pass ? "PASS" : "FAIL"));
        if (!rep.pass) {
            r.line("reason: " + rep.reason);
            r.put("reason", rep.reason);
        }
        for (int k = A.r() + A.m(); k < A.dim(); ++k) {
            r.line("phi " + A.names[k] + " = " + phi.at(k, k).to_string());
            r.put("phi." + A.names[k], phi.at(k, k).to_string());
        }
        r.print(job.machine, out);
        return rep.pass ? 0 : 1;
    }

    if (job.command == "selfinj-check") {
        if (job.inputs.size() != 1) throw PreconditionError("selfinj-check takes one input file");
        ParsedInput in = parse_file(job.inputs[0], job.trunc);
        if (!in.quiver) throw PreconditionError("input declares no quiver");
        AlgebraPtr A = make_presented_algebra(in.quiver, in.field, in.relations, job.trunc);
        SelfInjReport cert = check_self_injective(A);
        Report r;
        r.put("command", "selfinj-check");
        r.put("dim", static_cast<long>(A->dim()));
        r.put("selfinjective", cert.accepted ? "yes" : "no");
        r.line("dim: " + std::to_string(A->dim()));
        if (cert.accepted) {
            std::string pi;
            for (int j = 0; j < A->r; ++j) {
                if (j) pi += " ";
                pi += A->vnames[j] + "->" + A->vnames[cert.nakayama[j]];
                r.put("nakayama." + A->vnames[j], A->vnames[cert.nakayama[j]]);
            }
            r.line("self-injective: yes");
            r.line("nakayama: " + pi);
        } else {
            r.line("self-injective: no");
            r.line("reason: " + cert.reject_reason);
            r.put("reason", cert.reject_reason);
        }
        r.print(job.machine, out);
        return cert.accepted ? 0 : 1;
    }

    if (job.command == "stable-hom" || job.command == "shifted-hom") {
        if (job.inputs.size() != 2)
            throw PreconditionError(job.command + " takes an algebra file and a module file");
        if (job.args.size() != 2) throw PreconditionError(job.command + " takes two module names");
        std::ifstream fa(job.inputs[0]), fb(job.inputs[1]);
        if (!fa) throw ParseError("cannot open '" + job.inputs[0] + "'");
        if (!fb) throw ParseError("cannot open '" + job.inputs[1] + "'");
        std::stringstream joint;
        joint << fa.rdbuf() << "\n" << fb.rdbuf();
        ParsedInput in = parse_input(joint, job.trunc);
        if (!in.quiver) throw PreconditionError("input declares no quiver");
        AlgebraPtr A = make_presented_algebra(in.quiver, in.field, in.relations, job.trunc);
        SelfInjReport cert = check_self_injective(A);
        if (!cert.accepted)
            throw PreconditionError("algebra is not self-injective: " + cert.reject_reason);
        auto build = [&](const std::string& name) -> FDModule {
            for (const auto& [nm, data] : in.modules) {
                if (nm != name) continue;
                std::vector<int> dims(in.quiver->vertices.size(), 0);
                for (const auto& [vn, dd] : data.dims) dims[in.quiver->vertex_index(vn)] = dd;
                std::map<int, Matrix> mats;
                for (const auto& [an, entries] : data.maps) {
                    int a = in.quiver->arrow_index(an);
                    int rows = dims[in.quiver->arrows[a].tgt], cols = dims[in.quiver->arrows[a].src];
                    if (static_cast<int>(entries.size()) != rows * cols)
                        throw PreconditionError("matrix for arrow " + an + " needs " +
                                                std::to_string(rows * cols) + " entries");
                    Matrix m(rows, cols, in.field);
                    for (int i = 0; i < rows; ++i)
                        for (int j = 0; j < cols; ++j) m.at(i, j) = entries[i * cols + j];
                    mats.emplace(a, std::move(m));
                }
                return make_module(A, std::move(dims), mats);
            }
            throw PreconditionError("module '" + name + "' not found in the input");
        };
        FDModule M = build(job.args[0]);
        FDModule N = build(job.args[1]);
        Report r;
        if (job.command == "stable-hom") {
            StableHom st = stable_hom(M, N, cert);
            r.put("command", "stable-hom");
            r.put("dim", st.dim);
            r.line("dim: " + std::to_string(st.dim));
            for (size_t k = 0; k < st.basis.size(); ++k)
                for (int v = 0; v < A->r; ++v) {
                    const Matrix& m = st.basis[k].comps[v];
                    if (m.rows == 0 || m.cols == 0) continue;
                    std::string entries;
                    for (const auto& x : m.a) {
                        if (!entries.empty()) entries += " ";
                        entries += x.to_string();
                    }
                    r.line("basis " + std::to_string(k) + " [" + A->vnames[v] + "]: " + entries);
                    r.put("basis." + std::to_string(k) + "." + A->vnames[v], entries);
                }
        } else {
            if (!job.shift_n) throw PreconditionError("shifted-hom needs --n");
            long dim = shifted_hom(M, N, *job.shift_n, cert);
            r.put("command", "shifted-hom");
            r.put("n", static_cast<long>(*job.shift_n));
            r.put("dim", dim);
            r.line("dim: " + std::to_string(dim));
        }
        r.print(job.machine, out);
        return 0;
    }

    throw PreconditionError("unknown command '" + job.command + "'");
}

} // namespace dgql
