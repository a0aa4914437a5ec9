#include <catch2/catch_amalgamated.hpp>

#include "evasive/linalg.hpp"
#include "evasive/rng.hpp"

using namespace evasive;

namespace {

Mat random_mat(const SpecPtr& f, size_t r, size_t c, Rng& rng) {
    Mat m(f.get(), r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m.at(i, j) = f->from_code(rng.below(f->order));
    return m;
}

// independent determinant: Leibniz expansion by recursive cofactors
Fe leibniz_det(const Mat& A, std::vector<size_t> rows, std::vector<size_t> cols) {
    const FieldSpec* f = A.spec();
    if (rows.empty()) return f->one();
    Fe acc = f->zero();
    for (size_t k = 0; k < cols.size(); ++k) {
        const Fe& v = A.at(rows[0], cols[k]);
        if (v.is_zero()) continue;
        std::vector<size_t> sub_rows(rows.begin() + 1, rows.end());
        std::vector<size_t> sub_cols;
        for (size_t j = 0; j < cols.size(); ++j)
            if (j != k) sub_cols.push_back(cols[j]);
        Fe minor = leibniz_det(A, sub_rows, sub_cols);
        Fe term = v * minor;
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// rank oracle: largest k with a nonsingular k x k minor, all subsets tried
size_t minor_rank(const Mat& A) {
    size_t n = A.rows(), m = A.cols();
    size_t best = 0;
    for (uint32_t rs = 0; rs < (1u << n); ++rs) {
        std::vector<size_t> rows;
        for (size_t i = 0; i < n; ++i)
            if (rs & (1u << i)) rows.push_back(i);
        if (rows.size() <= best) continue;
        for (uint32_t cs = 0; cs < (1u << m); ++cs) {
            std::vector<size_t> cols;
            for (size_t j = 0; j < m; ++j)
                if (cs & (1u << j)) cols.push_back(j);
            if (cols.size() != rows.size()) continue;
            if (!leibniz_det(A, rows, cols).is_zero()) {
                best = rows.size();
                break;
            }
        }
    }
    return best;
}

bool in_rowspace(const Mat& M, const std::vector<Fe>& v) {
    Mat ext = M;
    ext.append_row(v);
    return rank(ext) == rank(M);
}

}  // namespace

TEST_CASE("rref basics and idempotence", "[linalg]") {
    auto f = FieldSpec::get(3, 1);
    Mat I = Mat::identity(f.get(), 4);
    auto rr = rref(I);
    CHECK(rr.R == I);
    CHECK(rr.rank == 4);
    CHECK(rr.pivots == std::vector<size_t>{0, 1, 2, 3});

    Mat Z(f.get(), 3, 5);
    auto rz = rref(Z);
    CHECK(rz.rank == 0);
    CHECK(rz.R == Z);

    Rng rng(0x11a6);
    for (int it = 0; it < 100; ++it) {
        Mat A = random_mat(f, 4, 6, rng);
        auto r1 = rref(A);
        auto r2 = rref(r1.R);
        CHECK(r1.R == r2.R);
        CHECK(r1.rank == r2.rank);
    }
}

TEST_CASE("rank agrees with the exhaustive minor oracle", "[linalg]") {
    auto f2 = FieldSpec::get(2, 1);
    Rng rng(0x04ac1e);
    for (int it = 0; it < 200; ++it) {
        size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
        Mat A = random_mat(f2, r, c, rng);
        CHECK(rank(A) == minor_rank(A));
    }
    auto f3 = FieldSpec::get(3, 1);
    for (int it = 0; it < 100; ++it) {
        size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
        Mat A = random_mat(f3, r, c, rng);
        CHECK(rank(A) == minor_rank(A));
    }
}

TEST_CASE("determinants", "[linalg]") {
    auto f = FieldSpec::get(3, 2);
    CHECK(det(Mat::identity(f.get(), 5)).is_one());
    CHECK(det(Mat(f.get(), 0, 0)).is_one());
    CHECK_THROWS_AS(det(Mat(f.get(), 2, 3)), Error);

    Mat dup(f.get(), 2, 2);
    dup.at(0, 0) = f->gen();
    dup.at(0, 1) = f->one();
    dup.at(1, 0) = f->gen();
    dup.at(1, 1) = f->one();
    CHECK(det(dup).is_zero());

    Rng rng(0xde7);
    for (int it = 0; it < 100; ++it) {
        Mat A = random_mat(f, 4, 4, rng);
        Mat B = random_mat(f, 4, 4, rng);
        CHECK(det(A * B) == det(A) * det(B));
        CHECK(det(A) == leibniz_det(A, {0, 1, 2, 3}, {0, 1, 2, 3}));
        CHECK(det(A.transposed()) == det(A));
        CHECK((det(A).is_zero()) == (rank(A) < 4));
    }
}

TEST_CASE("kernel bases", "[linalg]") {
    auto f = FieldSpec::get(3, 1);
    CHECK(kernel_basis(Mat::identity(f.get(), 4)).rows() == 0);
    Mat Z(f.get(), 3, 4);
    CHECK(kernel_basis(Z) == Mat::identity(f.get(), 4));

    Rng rng(0x6e41);
    for (int it = 0; it < 200; ++it) {
        size_t r = 1 + rng.below(5), c = 1 + rng.below(6);
        Mat A = random_mat(f, r, c, rng);
        Mat K = kernel_basis(A);
        CHECK(K.rows() + rank(A) == c);  // rank-nullity
        for (size_t i = 0; i < K.rows(); ++i) {
            // A * k^T = 0
            for (size_t row = 0; row < r; ++row) {
                Fe acc = f->zero();
                for (size_t j = 0; j < c; ++j) acc = acc + A.at(row, j) * K.at(i, j);
                CHECK(acc.is_zero());
            }
        }
        CHECK(rank(K) == K.rows());
        // canonical: basis only depends on the rowspace
        CHECK(kernel_basis(rref(A).R) == K);
    }
}

TEST_CASE("rowspace intersection", "[linalg]") {
    auto f = FieldSpec::get(2, 1);
    Rng rng(0x1357);

    // trivial cases
    Mat A(f.get(), 1, 3), B(f.get(), 1, 3);
    A.at(0, 0) = f->one();
    B.at(0, 1) = f->one();
    CHECK(intersect_rowspaces(A, B).rows() == 0);
    CHECK(intersect_rowspaces(A, A) == rref(A).R);

    for (int it = 0; it < 200; ++it) {
        size_t n = 3 + rng.below(4);
        Mat X = random_mat(f, 1 + rng.below(4), n, rng);
        Mat Y = random_mat(f, 1 + rng.below(4), n, rng);
        Mat I = intersect_rowspaces(X, Y);
        size_t expect = rank(X) + rank(Y) - rank(X.vstack(Y));
        CHECK(I.rows() == expect);
        for (size_t i = 0; i < I.rows(); ++i) {
            CHECK(in_rowspace(X, I.row(i)));
            CHECK(in_rowspace(Y, I.row(i)));
        }
        CHECK(intersect_rowspaces(X, Y) == intersect_rowspaces(Y, X));
    }
}

TEST_CASE("linear solve", "[linalg]") {
    auto f = FieldSpec::get(5, 1);
    Rng rng(0x501e);
    int consistent = 0, inconsistent = 0;
    for (int it = 0; it < 200; ++it) {
        size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
        Mat A = random_mat(f, r, c, rng);
        std::vector<Fe> b;
        if (it % 2 == 0) {
            // consistent by construction
            std::vector<Fe> x0;
            for (size_t j = 0; j < c; ++j) x0.push_back(f->from_code(rng.below(f->order)));
            for (size_t i = 0; i < r; ++i) {
                Fe acc = f->zero();
                for (size_t j = 0; j < c; ++j) acc = acc + A.at(i, j) * x0[j];
                b.push_back(acc);
            }
        } else {
            for (size_t i = 0; i < r; ++i) b.push_back(f->from_code(rng.below(f->order)));
        }
        auto x = solve(A, b);
        if (x) {
            ++consistent;
            for (size_t i = 0; i < r; ++i) {
                Fe acc = f->zero();
                for (size_t j = 0; j < c; ++j) acc = acc + A.at(i, j) * (*x)[j];
                CHECK(acc == b[i]);
            }
        } else {
            ++inconsistent;
            // the rhs must be outside the column space
            Mat At = A.transposed();
            CHECK(!in_rowspace(At, b));
        }
    }
    CHECK(consistent >= 100);
    CHECK(inconsistent >= 1);
}
