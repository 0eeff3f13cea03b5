#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "dgql/scalar.hpp"

namespace dgql {

// Dense exact matrix. Column-vector convention: a map V -> W with dim V = cols,
// dim W = rows acts by left multiplication.
struct Matrix {
    int rows = 0, cols = 0;
    Field field;
    std::vector<Scalar> a;

    Matrix() = default;
    Matrix(int r, int c, const Field& f)
        : rows(r), cols(c), field(f), a(static_cast<size_t>(r) * c, Scalar::zero(f)) {}

    static Matrix identity(int n, const Field& f) {
        Matrix m(n, n, f);
        for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
        return m;
    }

    Scalar& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Scalar& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool is_zero() const {
        for (const auto& x : a)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix operator*(const Matrix& o) const {
        Matrix r(rows, o.cols, field);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                if (at(i, k).is_zero()) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
            }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        Matrix r = *this;
        for (size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix r = *this;
        for (size_t i = 0; i < a.size(); ++i) r.a[i] -= o.a[i];
        return r;
    }
    Matrix scaled(const Scalar& c) const {
        Matrix r = *this;
        for (auto& x : r.a) x *= c;
        return r;
    }
    bool operator==(const Matrix& o) const {
        if (rows != o.rows || cols != o.cols) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != o.a[i]) return false;
        return true;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        std::vector<Scalar> r(rows, Scalar::zero(field));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (!at(i, j).is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    Matrix hcat(const Matrix& o) const {
        Matrix r(rows, cols + o.cols, field);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) r.at(i, j) = at(i, j);
            for (int j = 0; j < o.cols; ++j) r.at(i, cols + j) = o.at(i, j);
        }
        return r;
    }
};

// In-place reduced row echelon form; returns pivot column indices.
inline std::vector<int> rref(Matrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int i = row; i < m.rows; ++i)
            if (!m.at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
        Scalar inv = m.at(row, col).inverse();
        for (int j = col; j < m.cols; ++j) m.at(row, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            Scalar f = m.at(i, col);
            for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline int rank(Matrix m) { return static_cast<int>(rref(m).size()); }

// Basis of the right null space {x : Ax = 0}, one vector per free column.
inline std::vector<std::vector<Scalar>> kernel_basis(Matrix m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(m.cols, Scalar::zero(m.field));
        v[free] = Scalar::one(m.field);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m.at(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of Ax = b (free variables set to zero), or nullopt.
inline std::optional<std::vector<Scalar>> solve(const Matrix& A, const std::vector<Scalar>& b) {
    Matrix aug(A.rows, A.cols + 1, A.field);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == A.cols) return std::nullopt; // inconsistent
    std::vector<Scalar> x(A.cols, Scalar::zero(A.field));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), A.cols);
    return x;
}

// Incremental row space in echelon form; the workhorse for spans, quotients and
// filtration dimensions.
class RowSpace {
  public:
    explicit RowSpace(int width, const Field& f) : width_(width), field_(f) {}

    // Reduces v against the current space; returns the residue.
    std::vector<Scalar> reduce(std::vector<Scalar> v) const {
        for (const auto& row : rows_) {
            const Scalar& lead = v[row.second];
            if (lead.is_zero()) continue;
            Scalar f = lead;
            for (int j = row.second; j < width_; ++j) v[j] -= f * row.first[j];
        }
        return v;
    }

    // Returns true when v was independent (dimension grew).
    bool add(std::vector<Scalar> v) {
        v = reduce(std::move(v));
        int lead = -1;
        for (int j = 0; j < width_; ++j)
            if (!v[j].is_zero()) {
                lead = j;
                break;
            }
        if (lead < 0) return false;
        Scalar inv = v[lead].inverse();
        for (int j = lead; j < width_; ++j) v[j] *= inv;
        // keep earlier rows reduced against the new one
        for (auto& row : rows_) {
            Scalar f = row.first[lead];
            if (f.is_zero()) continue;
            for (int j = lead; j < width_; ++j) row.first[j] -= f * v[j];
        }
        rows_.emplace_back(std::move(v), lead);
        std::sort(rows_.begin(), rows_.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        return true;
    }

    bool contains(std::vector<Scalar> v) const {
        v = reduce(std::move(v));
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }

    int dim() const { return static_cast<int>(rows_.size()); }
    int width() const { return width_; }

  private:
    int width_;
    Field field_;
    std::vector<std::pair<std::vector<Scalar>, int>> rows_; // (row, lead column)
};

} // namespace dgql
