#pragma once

// Exact dense linear algebra over a FieldSpec field. Matrices are row-major
// and small; everything is plain Gaussian elimination with exact division.

#include <optional>
#include <vector>

#include "evasive/field.hpp"

namespace evasive {

class Mat {
  public:
    Mat() = default;
    Mat(const FieldSpec* f, size_t rows, size_t cols)
        : f_(f), rows_(rows), cols_(cols), a_(rows * cols, f->zero()) {}

    static Mat identity(const FieldSpec* f, size_t n) {
        Mat m(f, n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = f->one();
        return m;
    }
    static Mat from_rows(const FieldSpec* f, const std::vector<std::vector<Fe>>& rows) {
        size_t cols = rows.empty() ? 0 : rows[0].size();
        Mat m(f, rows.size(), cols);
        for (size_t i = 0; i < rows.size(); ++i) {
            require(rows[i].size() == cols, Err::ParamError, "ragged rows");
            for (size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    const FieldSpec* spec() const { return f_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Fe& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Fe& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Fe> row(size_t i) const {
        return {a_.begin() + long(i * cols_), a_.begin() + long((i + 1) * cols_)};
    }
    void set_row(size_t i, const std::vector<Fe>& r) {
        require(r.size() == cols_, Err::ParamError, "row length mismatch");
        for (size_t j = 0; j < cols_; ++j) at(i, j) = r[j];
    }
    void append_row(const std::vector<Fe>& r) {
        require(f_ != nullptr, Err::ParamError, "append to uninitialized matrix");
        require(r.size() == cols_, Err::ParamError, "row length mismatch");
        a_.insert(a_.end(), r.begin(), r.end());
        ++rows_;
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    Mat operator*(const Mat& o) const {
        require(cols_ == o.rows_, Err::ParamError, "matmul shape mismatch");
        Mat r(f_, rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const Fe& v = at(i, k);
                if (v.is_zero()) continue;
                for (size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + v * o.at(k, j);
            }
        return r;
    }

    Mat transposed() const {
        Mat r(f_, cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Mat vstack(const Mat& o) const {
        require(cols_ == o.cols_ && f_ == o.f_, Err::ParamError, "vstack shape mismatch");
        Mat r(f_, rows_ + o.rows_, cols_);
        r.a_ = a_;
        r.a_.insert(r.a_.end(), o.a_.begin(), o.a_.end());
        return r;
    }

  private:
    const FieldSpec* f_ = nullptr;
    size_t rows_ = 0, cols_ = 0;
    std::vector<Fe> a_;
};

struct RrefResult {
    Mat R;                       // reduced row echelon form, same shape
    size_t rank = 0;
    std::vector<size_t> pivots;  // pivot column per pivot row
};

inline RrefResult rref(Mat A) {
    RrefResult res{A, 0, {}};
    Mat& R = res.R;
    size_t r = 0;
    for (size_t c = 0; c < R.cols() && r < R.rows(); ++c) {
        size_t sel = r;
        while (sel < R.rows() && R.at(sel, c).is_zero()) ++sel;
        if (sel == R.rows()) continue;
        if (sel != r)
            for (size_t j = 0; j < R.cols(); ++j) std::swap(R.at(r, j), R.at(sel, j));
        Fe inv = R.at(r, c).inv();
        for (size_t j = c; j < R.cols(); ++j) R.at(r, j) = R.at(r, j) * inv;
        for (size_t i = 0; i < R.rows(); ++i) {
            if (i == r) continue;
            Fe v = R.at(i, c);
            if (v.is_zero()) continue;
            for (size_t j = c; j < R.cols(); ++j)
                R.at(i, j) = R.at(i, j) - v * R.at(r, j);
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline size_t rank(const Mat& A) { return rref(A).rank; }

// exact determinant; the empty 0x0 matrix has determinant 1
inline Fe det(Mat A) {
    require(A.rows() == A.cols(), Err::NotSquare, "determinant of a non-square matrix");
    const FieldSpec* f = A.spec();
    if (A.rows() == 0) {
        require(f != nullptr, Err::ParamError, "0x0 determinant needs a field-bound matrix");
        return f->one();
    }
    Fe d = f->one();
    size_t n = A.rows();
    for (size_t c = 0; c < n; ++c) {
        size_t sel = c;
        while (sel < n && A.at(sel, c).is_zero()) ++sel;
        if (sel == n) return f->zero();
        if (sel != c) {
            for (size_t j = 0; j < n; ++j) std::swap(A.at(c, j), A.at(sel, j));
            d = -d;
        }
        Fe piv = A.at(c, c);
        d = d * piv;
        Fe inv = piv.inv();
        for (size_t i = c + 1; i < n; ++i) {
            Fe v = A.at(i, c);
            if (v.is_zero()) continue;
            Fe s = v * inv;
            for (size_t j = c; j < n; ++j) A.at(i, j) = A.at(i, j) - s * A.at(c, j);
        }
    }
    return d;
}

// canonical (RREF) basis of the right kernel {x : A x = 0}, rows = basis
inline Mat kernel_basis(const Mat& A) {
    auto rr = rref(A);
    size_t n = A.cols();
    std::vector<char> is_pivot(n, 0);
    for (size_t c : rr.pivots) is_pivot[c] = 1;
    Mat K(A.spec(), 0, n);
    for (size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        std::vector<Fe> v(n, A.spec()->zero());
        v[c] = A.spec()->one();
        for (size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.R.at(i, c);
        K.append_row(v);
    }
    return rref(K).R;
}

// canonical basis of rowspace(A) ∩ rowspace(B) via the Zassenhaus trick
inline Mat intersect_rowspaces(const Mat& A, const Mat& B) {
    require(A.cols() == B.cols() && A.spec() == B.spec(), Err::ParamError,
            "intersect: ambient mismatch");
    const FieldSpec* f = A.spec();
    size_t n = A.cols();
    Mat Z(f, A.rows() + B.rows(), 2 * n);
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < n; ++j) {
            Z.at(i, j) = A.at(i, j);
            Z.at(i, n + j) = A.at(i, j);
        }
    for (size_t i = 0; i < B.rows(); ++i)
        for (size_t j = 0; j < n; ++j) Z.at(A.rows() + i, j) = B.at(i, j);
    auto rr = rref(Z);
    Mat I(f, 0, n);
    for (size_t i = 0; i < rr.rank; ++i) {
        if (rr.pivots[i] >= n) {
            std::vector<Fe> v(n, f->zero());
            for (size_t j = 0; j < n; ++j) v[j] = rr.R.at(i, n + j);
            I.append_row(v);
        }
    }
    return rref(I).R;
}

// one solution x of A x = b, if any
inline std::optional<std::vector<Fe>> solve(const Mat& A, const std::vector<Fe>& b) {
    require(b.size() == A.rows(), Err::ParamError, "solve: rhs length mismatch");
    const FieldSpec* f = A.spec();
    Mat aug(f, A.rows(), A.cols() + 1);
    for (size_t i = 0; i < A.rows(); ++i) {
        for (size_t j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols()) = b[i];
    }
    auto rr = rref(aug);
    for (size_t i = 0; i < rr.pivots.size(); ++i) {
        if (rr.pivots[i] == A.cols()) return std::nullopt;  // row (0 ... 0 | 1)
    }
    std::vector<Fe> x(A.cols(), f->zero());
    for (size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.R.at(i, A.cols());
    return x;
}

}  // namespace evasive
