#pragma once

// Byte-coded arithmetic for the coefficient field GF(q), q = p^s <= 256, plus
// flat matrices of codes. These carry all the hot row-reduction loops; Mat
// (linalg.hpp) stays for the small exact computations over big fields.

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "evasive/field.hpp"

namespace evasive {

struct SmallField {
    uint32_t p, s, q;
    SpecPtr spec;  // GF(p^s) with the canonical modulus

    std::vector<uint8_t> add_tab, mul_tab;  // q*q
    std::vector<uint8_t> inv_tab, neg_tab;  // q

    uint8_t add(uint8_t a, uint8_t b) const { return add_tab[size_t(a) * q + b]; }
    uint8_t mul(uint8_t a, uint8_t b) const { return mul_tab[size_t(a) * q + b]; }
    uint8_t neg(uint8_t a) const { return neg_tab[a]; }
    uint8_t sub(uint8_t a, uint8_t b) const { return add(a, neg(b)); }
    uint8_t inv(uint8_t a) const {
        require(a != 0, Err::DivisionByZero, "GF(q) inverse of zero");
        return inv_tab[a];
    }

    Fe to_elem(uint8_t code) const { return spec->from_code(code); }
    uint8_t from_elem(const Fe& x) const { return uint8_t(x.code()); }

    static const SmallField& get(uint32_t p, uint32_t s);
};

namespace detail {
inline std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<SmallField>>& smallfield_registry() {
    static std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<SmallField>> reg;
    return reg;
}
inline std::mutex& smallfield_mutex() {
    static std::mutex mu;
    return mu;
}
}  // namespace detail

inline const SmallField& SmallField::get(uint32_t p, uint32_t s) {
    std::lock_guard<std::mutex> lock(detail::smallfield_mutex());
    auto& reg = detail::smallfield_registry();
    auto key = std::make_pair(p, s);
    auto it = reg.find(key);
    if (it != reg.end()) return *it->second;

    auto sf = std::make_unique<SmallField>();
    sf->p = p;
    sf->s = s;
    sf->spec = FieldSpec::get(p, s);
    require(sf->spec->order <= 256, Err::ParamError, "GF(q) byte codes need q <= 256");
    sf->q = uint32_t(sf->spec->order);
    uint32_t q = sf->q;
    sf->add_tab.resize(size_t(q) * q);
    sf->mul_tab.resize(size_t(q) * q);
    sf->inv_tab.assign(q, 0);
    sf->neg_tab.assign(q, 0);
    for (uint32_t a = 0; a < q; ++a) {
        Fe xa = sf->spec->from_code(a);
        sf->neg_tab[a] = uint8_t((-xa).code());
        if (a) sf->inv_tab[a] = uint8_t(xa.inv().code());
        for (uint32_t b = 0; b < q; ++b) {
            Fe xb = sf->spec->from_code(b);
            sf->add_tab[size_t(a) * q + b] = uint8_t((xa + xb).code());
            sf->mul_tab[size_t(a) * q + b] = uint8_t((xa * xb).code());
        }
    }
    auto& slot = reg[key];
    slot = std::move(sf);
    return *slot;
}

struct FlatMat {
    const SmallField* F = nullptr;
    size_t rows = 0, cols = 0;
    std::vector<uint8_t> a;

    FlatMat() = default;
    FlatMat(const SmallField* f, size_t r, size_t c) : F(f), rows(r), cols(c), a(r * c, 0) {}

    uint8_t& at(size_t i, size_t j) { return a[i * cols + j]; }
    uint8_t at(size_t i, size_t j) const { return a[i * cols + j]; }
    uint8_t* row_ptr(size_t i) { return a.data() + i * cols; }
    const uint8_t* row_ptr(size_t i) const { return a.data() + i * cols; }

    void append_row(const uint8_t* r) {
        a.insert(a.end(), r, r + cols);
        ++rows;
    }

    bool operator==(const FlatMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
    bool operator<(const FlatMat& o) const {
        if (rows != o.rows) return rows < o.rows;
        return a < o.a;
    }
};

struct FlatRref {
    size_t rank = 0;
    std::vector<size_t> pivots;
};

inline FlatRref flat_rref(FlatMat& M) {
    const SmallField& F = *M.F;
    FlatRref res;
    size_t r = 0;
    for (size_t c = 0; c < M.cols && r < M.rows; ++c) {
        size_t sel = r;
        while (sel < M.rows && M.at(sel, c) == 0) ++sel;
        if (sel == M.rows) continue;
        if (sel != r) {
            for (size_t j = 0; j < M.cols; ++j) std::swap(M.at(r, j), M.at(sel, j));
        }
        uint8_t inv = F.inv(M.at(r, c));
        if (inv != 1)
            for (size_t j = c; j < M.cols; ++j) M.at(r, j) = F.mul(M.at(r, j), inv);
        for (size_t i = 0; i < M.rows; ++i) {
            if (i == r) continue;
            uint8_t v = M.at(i, c);
            if (!v) continue;
            if (F.q == 2) {
                for (size_t j = c; j < M.cols; ++j) M.at(i, j) ^= M.at(r, j);
            } else {
                for (size_t j = c; j < M.cols; ++j)
                    M.at(i, j) = F.sub(M.at(i, j), F.mul(v, M.at(r, j)));
            }
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    // canonical storage: drop zero rows
    M.a.resize(r * M.cols);
    M.rows = r;
    return res;
}

inline size_t flat_rank(FlatMat M) { return flat_rref(M).rank; }

inline FlatMat flat_kernel(const FlatMat& A) {
    FlatMat R = A;
    auto rr = flat_rref(R);
    const SmallField& F = *A.F;
    std::vector<char> is_pivot(A.cols, 0);
    for (size_t c : rr.pivots) is_pivot[c] = 1;
    FlatMat K(A.F, 0, A.cols);
    std::vector<uint8_t> v(A.cols);
    for (size_t c = 0; c < A.cols; ++c) {
        if (is_pivot[c]) continue;
        std::fill(v.begin(), v.end(), 0);
        v[c] = 1;
        for (size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = F.neg(R.at(i, c));
        K.append_row(v.data());
    }
    flat_rref(K);
    return K;
}

// A * B with byte codes
inline FlatMat flat_mul(const FlatMat& A, const FlatMat& B) {
    require(A.cols == B.rows, Err::ParamError, "flat_mul shape mismatch");
    const SmallField& F = *A.F;
    FlatMat R(A.F, A.rows, B.cols);
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t k = 0; k < A.cols; ++k) {
            uint8_t v = A.at(i, k);
            if (!v) continue;
            for (size_t j = 0; j < B.cols; ++j)
                R.at(i, j) = F.add(R.at(i, j), F.mul(v, B.at(k, j)));
        }
    return R;
}

// Streaming eliminator: a frozen RREF base plus appended rows, tracking how
// many new pivots the appended rows contribute. Reuse across a sweep via
// reset().
class Eliminator {
  public:
    void init(const SmallField* F, size_t cols) {
        F_ = F;
        cols_ = cols;
        row_of_pivot_.assign(cols, -1);
        store_.clear();
        pivot_of_row_.clear();
        base_rows_ = 0;
    }

    // base must already be in RREF
    void set_base(const FlatMat& base) {
        init(base.F, base.cols);
        for (size_t i = 0; i < base.rows; ++i) push_reduced(base.row_ptr(i));
        base_rows_ = base.rows;
    }

    void reset() {
        for (size_t i = base_rows_; i < pivot_of_row_.size(); ++i)
            row_of_pivot_[size_t(pivot_of_row_[i])] = -1;
        pivot_of_row_.resize(base_rows_);
        store_.resize(base_rows_ * cols_);
    }

    // reduces row in place; if independent, absorbs it and returns true
    bool add_row(uint8_t* row) {
        const SmallField& F = *F_;
        for (size_t c = 0; c < cols_; ++c) {
            uint8_t v = row[c];
            if (!v) continue;
            int pr = row_of_pivot_[c];
            if (pr < 0) {
                // normalize and absorb with pivot at c
                if (v != 1) {
                    uint8_t inv = F.inv(v);
                    for (size_t j = c; j < cols_; ++j) row[j] = F.mul(row[j], inv);
                }
                push_raw(row, c);
                return true;
            }
            const uint8_t* prow = store_.data() + size_t(pr) * cols_;
            if (F.q == 2) {
                for (size_t j = c; j < cols_; ++j) row[j] ^= prow[j];
            } else {
                for (size_t j = c; j < cols_; ++j) row[j] = F.sub(row[j], F.mul(v, prow[j]));
            }
        }
        return false;
    }

    size_t added() const { return pivot_of_row_.size() - base_rows_; }

  private:
    void push_raw(const uint8_t* row, size_t pivot) {
        store_.insert(store_.end(), row, row + cols_);
        row_of_pivot_[pivot] = int(pivot_of_row_.size());
        pivot_of_row_.push_back(int(pivot));
    }
    void push_reduced(const uint8_t* row) {
        size_t c = 0;
        while (c < cols_ && row[c] == 0) ++c;
        require(c < cols_, Err::ParamError, "zero row in RREF base");
        push_raw(row, c);
    }

    const SmallField* F_ = nullptr;
    size_t cols_ = 0;
    size_t base_rows_ = 0;
    std::vector<uint8_t> store_;
    std::vector<int> pivot_of_row_;
    std::vector<int> row_of_pivot_;
};

}  // namespace evasive
