#pragma once

#include <functional>
#include <map>
#include <vector>

#include "dgql/quiver.hpp"
#include "dgql/scalar.hpp"

namespace dgql {

// Truncated element of the complete graded path algebra: finitely many
// (path, scalar) terms, every path weight <= trunc, no zero coefficients,
// terms sorted by monomial order.
class PathSeries {
  public:
    PathSeries() = default;
    PathSeries(QuiverPtr q, Field f, long trunc) : q_(std::move(q)), field_(f), trunc_(trunc) {
        if (trunc_ < 1) throw PreconditionError("truncation order must be >= 1");
    }

    static PathSeries zero(QuiverPtr q, Field f, long trunc) { return PathSeries(q, f, trunc); }

    static PathSeries monomial(QuiverPtr q, Field f, long trunc, Path p, Scalar c) {
        PathSeries s(q, f, trunc);
        s.add_term(std::move(p), std::move(c));
        return s;
    }
    static PathSeries monomial(QuiverPtr q, Field f, long trunc, Path p) {
        return monomial(q, f, trunc, std::move(p), Scalar::one(f));
    }

    const QuiverPtr& quiver() const { return q_; }
    const Field& field() const { return field_; }
    long trunc() const { return trunc_; }
    const std::vector<std::pair<Path, Scalar>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Adds c*p, dropping weight > trunc and cancellations.
    void add_term(Path p, Scalar c) {
        if (!path_valid(*q_, p)) throw PreconditionError("invalid path for this quiver");
        if (c.is_zero() || path_weight(*q_, p) > trunc_) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                                   [this](const auto& t, const Path& key) {
                                       return path_cmp(*q_, t.first, key) < 0;
                                   });
        if (it != terms_.end() && path_cmp(*q_, it->first, p) == 0) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        } else {
            terms_.insert(it, {std::move(p), std::move(c)});
        }
    }

    void check_compatible(const PathSeries& o) const {
        if (field_ != o.field_ || trunc_ != o.trunc_ || !(*q_ == *o.q_))
            throw PreconditionError("incompatible quiver/field/truncation");
    }

    PathSeries operator+(const PathSeries& o) const {
        check_compatible(o);
        PathSeries r = *this;
        for (const auto& [p, c] : o.terms_) r.add_term(p, c);
        return r;
    }
    PathSeries operator-() const {
        PathSeries r = *this;
        for (auto& [p, c] : r.terms_) c = -c;
        return r;
    }
    PathSeries operator-(const PathSeries& o) const { return *this + (-o); }

    PathSeries scaled(const Scalar& c) const {
        PathSeries r(q_, field_, trunc_);
        if (c.is_zero()) return r;
        r.terms_ = terms_;
        for (auto& [p, x] : r.terms_) x *= c;
        return r;
    }

    PathSeries operator*(const PathSeries& o) const {
        check_compatible(o);
        PathSeries r(q_, field_, trunc_);
        for (const auto& [p, c] : terms_) {
            long wp = path_weight(*q_, p);
            for (const auto& [p2, c2] : o.terms_) {
                if (path_target(*q_, p) != p2.src) continue;
                if (wp + path_weight(*q_, p2) > trunc_) continue;
                r.add_term(compose_paths(*q_, p, p2), c * c2);
            }
        }
        return r;
    }

    PathSeries& operator+=(const PathSeries& o) { return *this = *this + o; }
    PathSeries& operator-=(const PathSeries& o) { return *this = *this - o; }

    bool operator==(const PathSeries& o) const {
        check_compatible(o);
        if (terms_.size() != o.terms_.size()) return false;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (path_cmp(*q_, terms_[i].first, o.terms_[i].first) != 0 ||
                terms_[i].second != o.terms_[i].second)
                return false;
        return true;
    }

    // Largest term in monomial order.
    const std::pair<Path, Scalar>& lead() const {
        if (terms_.empty()) throw PreconditionError("lead of zero series");
        return terms_.back();
    }

    // True when all terms are homogeneous of one degree; reports it.
    std::optional<int> homogeneous_degree() const {
        if (terms_.empty()) return std::nullopt;
        int d = path_degree(*q_, terms_.front().first);
        for (const auto& [p, c] : terms_)
            if (path_degree(*q_, p) != d) return std::nullopt;
        return d;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (i) s += " + ";
            s += terms_[i].second.to_string() + " " + path_to_string(*q_, terms_[i].first);
        }
        return s;
    }

  private:
    QuiverPtr q_;
    Field field_;
    long trunc_ = 1;
    std::vector<std::pair<Path, Scalar>> terms_;
};

inline PathSeries series_mul(const PathSeries& f, const PathSeries& g) { return f * g; }

// Copies a series into a different truncation order (dropping heavy terms when
// shrinking).
inline PathSeries retruncate(const PathSeries& s, long trunc) {
    PathSeries r(s.quiver(), s.field(), trunc);
    for (const auto& [p, c] : s.terms()) r.add_term(p, c);
    return r;
}

} // namespace dgql
