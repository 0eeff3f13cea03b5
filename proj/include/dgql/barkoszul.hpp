#pragma once

#include <functional>
#include <map>

#include "dgql/dgalg.hpp"

namespace dgql {

struct AugBasisElem {
    std::string name;
    int deg = 0;
    int src = 0, tgt = 0; // idempotent chain e_src * a * e_tgt (left-to-right)
};

struct MEntry {
    std::vector<int> chain;                      // basis indices, composable
    std::vector<std::pair<int, Scalar>> value;   // m_n(chain)
};

// Finite-dimensional augmented algebra / A-infinity data over K = k^r, given by
// the Ā basis and structure constants m_n (degree 2-n). Units are the
// idempotent family and live outside Ā; strict unitality is implicit.
//
// Internally everything is converted to the shifted operations on Ā[1],
//   b_n := (-1)^n (-1)^{sum_i (n-i)|a_i|} m_n     (|a| = deg a - 1),
// for which the bar differential is the sum of insertions with prefix Koszul
// signs and the A-infinity relations read sum b(1 ⊗ b ⊗ 1) = 0 with no extra
// signs. Relations are checked on all chains of length <= 2 n_max - 1, which is
// a complete certificate (longer relations are vacuous).
class AugmentedAlgebra {
  public:
    static AugmentedAlgebra make(Field field, std::vector<std::string> idem_names,
                                 std::vector<AugBasisElem> basis, std::vector<MEntry> entries) {
        AugmentedAlgebra A;
        A.field_ = field;
        A.idem_names_ = std::move(idem_names);
        A.basis_ = std::move(basis);
        int r = static_cast<int>(A.idem_names_.size());
        if (r < 1) throw PreconditionError("need at least one idempotent");
        for (const auto& b : A.basis_)
            if (b.src < 0 || b.src >= r || b.tgt < 0 || b.tgt >= r)
                throw PreconditionError("basis element '" + b.name + "' has a bad idempotent");

        A.n_max_ = 1;
        for (auto& e : entries) {
            int n = static_cast<int>(e.chain.size());
            if (n < 1) throw PreconditionError("m_0 is not part of the data");
            if (!A.composable(e.chain))
                throw PreconditionError("structure constants on a non-composable chain");
            int degsum = 2 - n;
            for (int i : e.chain) degsum += A.basis_[i].deg;
            std::map<int, Scalar> merged;
            for (auto& [k, c] : e.value) {
                if (c.is_zero()) continue;
                if (A.basis_[k].deg != degsum)
                    throw PreconditionError("m_" + std::to_string(n) + " violates its degree");
                if (A.basis_[k].src != A.basis_[e.chain.front()].src ||
                    A.basis_[k].tgt != A.basis_[e.chain.back()].tgt)
                    throw PreconditionError("m_" + std::to_string(n) + " breaks K-bilinearity");
                auto [it, fresh] = merged.emplace(k, c);
                if (!fresh) it->second += c;
            }
            std::vector<std::pair<int, Scalar>> clean;
            for (auto& [k, c] : merged)
                if (!c.is_zero()) clean.emplace_back(k, c);
            if (clean.empty()) continue;
            A.n_max_ = std::max(A.n_max_, n);
            auto [it, fresh] = A.m_.emplace(e.chain, clean);
            if (!fresh) throw PreconditionError("duplicate structure-constant chain");
        }

        // shifted operations
        for (const auto& [chain, combo] : A.m_) {
            int n = static_cast<int>(chain.size());
            int exp = n;
            for (int i = 0; i < n; ++i) exp += (n - 1 - i) * A.sdeg(chain[i]);
            std::vector<std::pair<int, Scalar>> bc = combo;
            if (exp % 2 != 0)
                for (auto& [k, c] : bc) c = -c;
            A.b_.emplace(chain, std::move(bc));
        }

        A.positive_minimal_ = true;
        for (const auto& [chain, combo] : A.m_)
            if (chain.size() == 1) A.positive_minimal_ = false;
        for (const auto& b : A.basis_)
            if (b.deg < 1) A.positive_minimal_ = false;

        A.check_a_infinity();
        return A;
    }

    const Field& field() const { return field_; }
    int idem_count() const { return static_cast<int>(idem_names_.size()); }
    const std::vector<std::string>& idem_names() const { return idem_names_; }
    const std::vector<AugBasisElem>& basis() const { return basis_; }
    int n_max() const { return n_max_; }
    bool positive_minimal() const { return positive_minimal_; }
    int sdeg(int i) const { return basis_[i].deg - 1; } // degree in Ā[1]

    bool composable(const std::vector<int>& chain) const {
        for (size_t i = 0; i + 1 < chain.size(); ++i)
            if (basis_[chain[i]].tgt != basis_[chain[i + 1]].src) return false;
        return true;
    }

    const std::vector<std::pair<int, Scalar>>* b(const std::vector<int>& chain) const {
        auto it = b_.find(chain);
        return it == b_.end() ? nullptr : &it->second;
    }
    const std::vector<std::pair<int, Scalar>>* m(const std::vector<int>& chain) const {
        auto it = m_.find(chain);
        return it == m_.end() ? nullptr : &it->second;
    }

    void for_each_chain(int len, const std::function<void(const std::vector<int>&)>& fn) const {
        std::vector<int> chain;
        chain.reserve(len);
        std::function<void()> rec = [&]() {
            if (static_cast<int>(chain.size()) == len) {
                fn(chain);
                return;
            }
            for (int k = 0; k < static_cast<int>(basis_.size()); ++k) {
                if (!chain.empty() && basis_[chain.back()].tgt != basis_[k].src) continue;
                chain.push_back(k);
                rec();
                chain.pop_back();
            }
        };
        rec();
    }

  private:
    void check_a_infinity() const {
        int upto = 2 * n_max_ - 1;
        for (int n = 1; n <= upto; ++n) {
            for_each_chain(n, [&](const std::vector<int>& chain) {
                std::map<int, Scalar> acc; // sum b_u(1 ⊗ b_s ⊗ 1), must vanish
                for (int r = 0; r < n; ++r) {
                    int prefix_sdeg = 0;
                    for (int i = 0; i < r; ++i) prefix_sdeg += sdeg(chain[i]);
                    for (int s = 1; r + s <= n && s <= n_max_; ++s) {
                        if (n - s + 1 > n_max_) continue;
                        std::vector<int> mid(chain.begin() + r, chain.begin() + r + s);
                        const auto* inner = b(mid);
                        if (!inner) continue;
                        for (const auto& [k, c] : *inner) {
                            std::vector<int> outer;
                            outer.insert(outer.end(), chain.begin(), chain.begin() + r);
                            outer.push_back(k);
                            outer.insert(outer.end(), chain.begin() + r + s, chain.end());
                            Scalar coeff = (prefix_sdeg % 2 != 0) ? -c : c;
                            const auto* outv = b(outer);
                            if (!outv) continue;
                            for (const auto& [k2, c2] : *outv) {
                                auto [it, fresh] = acc.emplace(k2, coeff * c2);
                                if (!fresh) it->second += coeff * c2;
                            }
                        }
                    }
                }
                for (const auto& [k, c] : acc) {
                    (void)k;
                    if (!c.is_zero())
                        throw PreconditionError("A-infinity relations fail on a chain of length " +
                                                std::to_string(n));
                }
            });
        }
    }

    Field field_;
    std::vector<std::string> idem_names_;
    std::vector<AugBasisElem> basis_;
    int n_max_ = 1;
    bool positive_minimal_ = false;
    std::map<std::vector<int>, std::vector<std::pair<int, Scalar>>> m_;
    std::map<std::vector<int>, std::vector<std::pair<int, Scalar>>> b_;
};

// Chain of composable Ā[1] basis elements; length 0 is an idempotent of K.
struct BarChain {
    int vertex = 0;            // meaningful when elems is empty
    std::vector<int> elems;

    bool operator<(const BarChain& o) const {
        if (elems.size() != o.elems.size()) return elems.size() < o.elems.size();
        if (elems.empty()) return vertex < o.vertex;
        return elems < o.elems;
    }
    bool operator==(const BarChain& o) const {
        return elems.empty() ? (o.elems.empty() && vertex == o.vertex) : elems == o.elems;
    }
};

using ChainCombo = std::map<BarChain, Scalar>;
using SplitCombo = std::map<std::pair<BarChain, BarChain>, Scalar>;

// Bar construction T_K(Ā[1]) up to tensor length L, with the coderivation
// differential and the deconcatenation comultiplication.
class BarComplex {
  public:
    BarComplex(std::shared_ptr<const AugmentedAlgebra> A, long L) : A_(std::move(A)), L_(L) {
        if (L_ < 1) throw PreconditionError("bar truncation must be >= 1");
        chains_.resize(L_ + 1);
        for (int v = 0; v < A_->idem_count(); ++v) chains_[0].push_back(BarChain{v, {}});
        for (long n = 1; n <= L_; ++n)
            A_->for_each_chain(static_cast<int>(n), [&](const std::vector<int>& c) {
                chains_[n].push_back(BarChain{A_->basis()[c.front()].src, c});
            });
    }

    const AugmentedAlgebra& algebra() const { return *A_; }
    long L() const { return L_; }
    const std::vector<BarChain>& chains(long len) const { return chains_[len]; }

    int degree(const BarChain& c) const {
        int d = 0;
        for (int k : c.elems) d += A_->sdeg(k);
        return d;
    }

    // d_BA = sum over insertions of b_s with prefix Koszul signs; includes the
    // boundary merge (a_1, a_2) and the interior differential on a_1.
    ChainCombo d(const BarChain& c) const {
        ChainCombo out;
        int n = static_cast<int>(c.elems.size());
        for (int r = 0; r < n; ++r) {
            int prefix = 0;
            for (int i = 0; i < r; ++i) prefix += A_->sdeg(c.elems[i]);
            for (int s = 1; r + s <= n && s <= A_->n_max(); ++s) {
                std::vector<int> mid(c.elems.begin() + r, c.elems.begin() + r + s);
                const auto* combo = A_->b(mid);
                if (!combo) continue;
                for (const auto& [k, coeff] : *combo) {
                    BarChain nc;
                    nc.elems.insert(nc.elems.end(), c.elems.begin(), c.elems.begin() + r);
                    nc.elems.push_back(k);
                    nc.elems.insert(nc.elems.end(), c.elems.begin() + r + s, c.elems.end());
                    nc.vertex = A_->basis()[nc.elems.front()].src;
                    Scalar v = (prefix % 2 != 0) ? -coeff : coeff;
                    auto [it, fresh] = out.emplace(nc, v);
                    if (!fresh) {
                        it->second += v;
                        if (it->second.is_zero()) out.erase(it);
                    }
                }
            }
        }
        return out;
    }

    ChainCombo d(const ChainCombo& x) const {
        ChainCombo out;
        for (const auto& [c, coeff] : x)
            for (const auto& [c2, coeff2] : d(c)) {
                auto [it, fresh] = out.emplace(c2, coeff * coeff2);
                if (!fresh) {
                    it->second += coeff * coeff2;
                    if (it->second.is_zero()) out.erase(it);
                }
            }
        return out;
    }

    // Delta(a_1 ⊗ ... ⊗ a_n) = sum_{p=0}^{n} (a_1...a_p) ⊗ (a_{p+1}...a_n).
    SplitCombo delta(const BarChain& c) const {
        SplitCombo out;
        int n = static_cast<int>(c.elems.size());
        for (int p = 0; p <= n; ++p) {
            BarChain left, right;
            left.elems.assign(c.elems.begin(), c.elems.begin() + p);
            right.elems.assign(c.elems.begin() + p, c.elems.end());
            int cut = p == 0 ? (n == 0 ? c.vertex : A_->basis()[c.elems.front()].src)
                             : A_->basis()[c.elems[p - 1]].tgt;
            left.vertex = p == 0 ? cut : A_->basis()[c.elems.front()].src;
            right.vertex = cut;
            out[{left, right}] = Scalar::one(A_->field());
        }
        return out;
    }

  private:
    std::shared_ptr<const AugmentedAlgebra> A_;
    long L_;
    std::vector<std::vector<BarChain>> chains_;
};

inline BarComplex bar_complex(std::shared_ptr<const AugmentedAlgebra> A, long L) {
    return BarComplex(std::move(A), L);
}

// d_BA² = 0 on every chain of length <= L.
inline bool bar_d_squared_ok(const BarComplex& bc, std::string* what = nullptr) {
    for (long n = 0; n <= bc.L(); ++n)
        for (const BarChain& c : bc.chains(n))
            if (!bc.d(bc.d(c)).empty()) {
                if (what) *what = "chain of length " + std::to_string(n);
                return false;
            }
    return true;
}

// Coderivation identity with Koszul signs: Δ d = (d ⊗ 1 + 1 ⊗ d) Δ, where
// (1 ⊗ d)(x ⊗ y) = (-1)^{deg x} x ⊗ d(y).
inline bool bar_coderivation_ok(const BarComplex& bc, std::string* what = nullptr) {
    const Field& F = bc.algebra().field();
    for (long n = 0; n <= bc.L(); ++n)
        for (const BarChain& c : bc.chains(n)) {
            SplitCombo lhs;
            for (const auto& [c2, coeff] : bc.d(c))
                for (const auto& [pr, s] : bc.delta(c2)) {
                    auto [it, fresh] = lhs.emplace(pr, coeff * s);
                    if (!fresh) it->second += coeff * s;
                }
            SplitCombo rhs;
            auto acc = [&](const std::pair<BarChain, BarChain>& key, const Scalar& v) {
                auto [it, fresh] = rhs.emplace(key, v);
                if (!fresh) it->second += v;
            };
            for (const auto& [pr, s] : bc.delta(c)) {
                for (const auto& [l2, coeff] : bc.d(pr.first)) acc({l2, pr.second}, s * coeff);
                Scalar sgn = bc.degree(pr.first) % 2 != 0 ? -Scalar::one(F) : Scalar::one(F);
                for (const auto& [r2, coeff] : bc.d(pr.second)) acc({pr.first, r2}, s * sgn * coeff);
            }
            for (const auto& [key, v] : lhs) {
                auto it = rhs.find(key);
                Scalar rv = it == rhs.end() ? Scalar::zero(F) : it->second;
                if (!(v == rv)) {
                    if (what) *what = "chain of length " + std::to_string(n);
                    return false;
                }
            }
            for (const auto& [key, v] : rhs)
                if (!lhs.count(key) && !v.is_zero()) {
                    if (what) *what = "chain of length " + std::to_string(n);
                    return false;
                }
        }
    return true;
}

// Koszul sign of reversing a chain (the graded dual of a ⊗-chain is the
// reversed product of dual generators).
inline int reversal_sign(const AugmentedAlgebra& A, const std::vector<int>& chain) {
    int s = 0;
    for (size_t i = 0; i < chain.size(); ++i)
        for (size_t j = i + 1; j < chain.size(); ++j) s += A.sdeg(chain[i]) * A.sdeg(chain[j]);
    return s % 2 != 0 ? -1 : 1;
}

struct DualBarResult {
    QuiverPtr quiver;
    DGQuiverAlgebra dg;
};

// E(A) = dual bar construction as a complete dg-quiver algebra: one vertex per
// idempotent, one arrow per dual basis element f_ā : t(ā) -> s(ā) of degree
// 1 - deg(ā) and weight 1 (tensor length), differential
//   d(f_ā) = sum over chains c with ā in b_n(c) of κ(c) <ā, b_n(c)> f_{a_n}...f_{a_1},
// truncated at weight L. For a dg input this is exactly
//   d(f)(a_1) = -f(d_A a_1),  d(f)(a_1 ⊗ a_2) = (-1)^{|a_1|} f(a_1 a_2).
inline DualBarResult dual_bar(const AugmentedAlgebra& A, long L) {
    std::vector<Arrow> arrows;
    for (const auto& b : A.basis())
        arrows.push_back(Arrow{b.name, b.tgt, b.src, 1 - b.deg, 1});
    QuiverPtr q = GradedQuiver::make(A.idem_names(), std::move(arrows));

    std::vector<PathSeries> d(A.basis().size(), PathSeries::zero(q, A.field(), L));
    for (int n = 1; n <= A.n_max() && n <= L; ++n) {
        A.for_each_chain(n, [&](const std::vector<int>& chain) {
            const auto* combo = A.b(chain);
            if (!combo) return;
            int kappa = reversal_sign(A, chain);
            Path p{q->arrows[chain.back()].src, {}};
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) p.arrows.push_back(*it);
            for (const auto& [k, c] : *combo)
                d[k].add_term(p, kappa < 0 ? -c : c);
        });
    }
    DualBarResult res{q, DGQuiverAlgebra::make(q, A.field(), L, std::move(d))};
    auto rep = check_d_squared(res.dg);
    if (!rep.pass)
        throw InternalError("dual bar differential does not square to zero at arrow " + rep.arrow);
    return res;
}

// Quiver shape of E(A) for positive minimal input: the number of arrows i -> j
// in degree p is the dimension of the (j, i)-component of Ā in degree 1 - p.
inline QuiverPtr dual_bar_quiver(const AugmentedAlgebra& A) {
    if (!A.positive_minimal())
        throw PreconditionError("dual_bar_quiver needs positive minimal input");
    std::vector<Arrow> arrows;
    for (const auto& b : A.basis())
        arrows.push_back(Arrow{b.name, b.tgt, b.src, 1 - b.deg, 1});
    return GradedQuiver::make(A.idem_names(), std::move(arrows));
}

} // namespace dgql
