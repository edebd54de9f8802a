// matrix.hpp: dense matrices over a shared Field, plus the handful of exact
// kernels everything else is built on: reduced row echelon form, rank, kernel
// bases, particular solutions, and row/column permutation.

#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

#include "field.hpp"

namespace linrem {

class Matrix {
public:
    Matrix() = default;

    Matrix(FieldPtr field, int rows, int cols)
        : field_(std::move(field)), rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * cols, 0) {
        if (!field_) throw std::invalid_argument("matrix: null field");
        if (rows < 0 || cols < 0) throw std::invalid_argument("matrix: negative dimension");
    }

    static Matrix identity(FieldPtr field, int n) {
        Matrix m(std::move(field), n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    const FieldPtr& field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Elt at(int r, int c) const { return data_[index(r, c)]; }
    Elt& at(int r, int c) { return data_[index(r, c)]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_ && field_ && o.field_ &&
               field_->same(*o.field_);
    }

    std::vector<Elt> row(int r) const {
        std::vector<Elt> out(cols_);
        for (int c = 0; c < cols_; ++c) out[c] = at(r, c);
        return out;
    }

    std::vector<Elt> col(int c) const {
        std::vector<Elt> out(rows_);
        for (int r = 0; r < rows_; ++r) out[r] = at(r, c);
        return out;
    }

    bool row_is_zero(int r) const {
        for (int c = 0; c < cols_; ++c)
            if (at(r, c) != 0) return false;
        return true;
    }

    bool col_is_zero(int c) const {
        for (int r = 0; r < rows_; ++r)
            if (at(r, c) != 0) return false;
        return true;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](Elt e) { return e == 0; });
    }

private:
    FieldPtr field_;
    int rows_ = 0, cols_ = 0;
    std::vector<Elt> data_;

    std::size_t index(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("matrix: index out of range");
        return static_cast<std::size_t>(r) * cols_ + c;
    }
};

struct RrefResult {
    Matrix reduced;
    std::vector<int> pivots;  // pivot column of row i, strictly increasing
    int rank = 0;
};

// Deterministic Gauss-Jordan: in each column the first nonzero entry at or
// below the current row becomes the pivot.
inline RrefResult rref(const Matrix& m) {
    const Field& f = *m.field();
    Matrix r = m;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < r.cols() && row < r.rows(); ++col) {
        int sel = -1;
        for (int i = row; i < r.rows(); ++i) {
            if (r.at(i, col) != 0) {
                sel = i;
                break;
            }
        }
        if (sel < 0) continue;
        if (sel != row)
            for (int c = 0; c < r.cols(); ++c) std::swap(r.at(sel, c), r.at(row, c));
        const Elt scale = f.inv(r.at(row, col));
        if (scale != 1)
            for (int c = 0; c < r.cols(); ++c) r.at(row, c) = f.mul(r.at(row, c), scale);
        for (int i = 0; i < r.rows(); ++i) {
            if (i == row) continue;
            const Elt factor = r.at(i, col);
            if (factor == 0) continue;
            for (int c = 0; c < r.cols(); ++c)
                r.at(i, c) = f.sub(r.at(i, c), f.mul(factor, r.at(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(r), std::move(pivots), row};
}

inline int rank(const Matrix& m) { return rref(m).rank; }

// Columns of the result form a basis of {x : Mx = 0}; one column per free
// column of rref(M), in ascending free-column order. Zero columns => empty.
inline Matrix kernel_basis(const Matrix& m) {
    const Field& f = *m.field();
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : rr.pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix basis(m.field(), m.cols(), static_cast<int>(free_cols.size()));
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        const int fc = free_cols[j];
        basis.at(fc, static_cast<int>(j)) = 1;
        for (int i = 0; i < rr.rank; ++i)
            basis.at(rr.pivots[i], static_cast<int>(j)) = f.neg(rr.reduced.at(i, fc));
    }
    return basis;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    require_same_field(*a.field(), *b.field());
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix: dimension mismatch in product");
    const Field& f = *a.field();
    Matrix out(a.field(), a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int t = 0; t < a.cols(); ++t) {
            const Elt aval = a.at(i, t);
            if (aval == 0) continue;
            for (int j = 0; j < b.cols(); ++j)
                out.at(i, j) = f.add(out.at(i, j), f.mul(aval, b.at(t, j)));
        }
    return out;
}

inline std::vector<Elt> mat_vec(const Matrix& a, const std::vector<Elt>& x) {
    if (static_cast<int>(x.size()) != a.cols())
        throw std::invalid_argument("matrix: vector length mismatch");
    const Field& f = *a.field();
    std::vector<Elt> out(a.rows(), 0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a.at(i, j) != 0 && x[j] != 0)
                out[i] = f.add(out[i], f.mul(a.at(i, j), x[j]));
    return out;
}

inline Matrix transpose(const Matrix& m) {
    Matrix out(m.field(), m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
    return out;
}

// perm[new_index] = old_index; perm must be a permutation of [0, cols).
inline Matrix permute_cols(const Matrix& m, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != m.cols())
        throw std::invalid_argument("matrix: permutation length mismatch");
    Matrix out(m.field(), m.rows(), m.cols());
    std::vector<bool> seen(perm.size(), false);
    for (int j = 0; j < m.cols(); ++j) {
        const int src = perm[j];
        if (src < 0 || src >= m.cols() || seen[src])
            throw std::invalid_argument("matrix: invalid permutation");
        seen[src] = true;
        for (int i = 0; i < m.rows(); ++i) out.at(i, j) = m.at(i, src);
    }
    return out;
}

inline Matrix drop_row(const Matrix& m, int r) {
    Matrix out(m.field(), m.rows() - 1, m.cols());
    for (int i = 0, t = 0; i < m.rows(); ++i) {
        if (i == r) continue;
        for (int j = 0; j < m.cols(); ++j) out.at(t, j) = m.at(i, j);
        ++t;
    }
    return out;
}

inline Matrix drop_col(const Matrix& m, int c) {
    Matrix out(m.field(), m.rows(), m.cols() - 1);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0, t = 0; j < m.cols(); ++j) {
            if (j == c) continue;
            out.at(i, t++) = m.at(i, j);
        }
    return out;
}

// Submatrix from the listed columns, in the given order.
inline Matrix select_cols(const Matrix& m, const std::vector<int>& cols) {
    Matrix out(m.field(), m.rows(), static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < m.rows(); ++i)
            out.at(i, static_cast<int>(j)) = m.at(i, cols[j]);
    return out;
}

// One solution of Mx = rhs, or nullopt if inconsistent. Free variables are 0.
inline std::optional<std::vector<Elt>> solve_particular(const Matrix& m,
                                                        const std::vector<Elt>& rhs) {
    if (static_cast<int>(rhs.size()) != m.rows())
        throw std::invalid_argument("matrix: rhs length mismatch");
    Matrix aug(m.field(), m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = rhs[i];
    }
    RrefResult rr = rref(aug);
    for (int p : rr.pivots)
        if (p == m.cols()) return std::nullopt;
    std::vector<Elt> x(m.cols(), 0);
    for (int i = 0; i < rr.rank; ++i) x[rr.pivots[i]] = rr.reduced.at(i, m.cols());
    return x;
}

inline std::string format_matrix(const Matrix& m) {
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << m.at(i, j);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace linrem
