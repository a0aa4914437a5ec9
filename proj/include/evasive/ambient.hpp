#pragma once

// V(r, q^n) as an explicit GF(q)-space of dimension rn: vectors over the
// degree-n extension, flattened coordinates over GF(q) w.r.t. the polynomial
// basis {1, zeta, ..., zeta^(n-1)}, canonical RREF storage for subspaces,
// streaming enumeration of GF(q^n)-subspaces, and the field-model
// identification of V(r, q^n) with GF(q^(rn)).

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "evasive/field.hpp"
#include "evasive/linalg.hpp"
#include "evasive/smallfield.hpp"
#include "evasive/subfield.hpp"

namespace evasive {

class AmbientSpace;
using AmbPtr = std::shared_ptr<const AmbientSpace>;

inline FlatMat flat_inverse(const FlatMat& A) {
    require(A.rows == A.cols, Err::NotSquare, "flat_inverse: square input required");
    size_t n = A.rows;
    FlatMat aug(A.F, n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n + i) = 1;
    }
    auto rr = flat_rref(aug);
    require(rr.rank == n, Err::ParamError, "flat_inverse: singular matrix");
    FlatMat inv(A.F, n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

class AmbientSpace : public std::enable_shared_from_this<AmbientSpace> {
  public:
    uint32_t p, s, n, r;
    uint64_t q;   // p^s
    uint64_t qn;  // q^n
    SpecPtr Kn;   // GF(q^n)
    const SmallField* Fq;
    uint32_t flat_dim;  // r * n, the GF(q)-dimension of V

    static AmbPtr get(uint32_t p, uint32_t s, uint32_t n, uint32_t r);

    // --- GF(q)-coordinates of GF(q^n) elements ---

    void flatten_elem(const Fe& x, uint8_t* out) const {
        if (flat_identity_) {
            for (uint32_t i = 0; i < n; ++i) out[i] = x.coeff(i);
            return;
        }
        const uint32_t sn = s * n;
        std::vector<uint8_t> w(sn, 0);
        const auto& M = fq_coords_;  // sn x sn over GF(p), row-major
        for (uint32_t jc = 0; jc < sn; ++jc) {
            uint8_t v = x.coeff(jc);
            if (!v) continue;
            for (uint32_t i = 0; i < sn; ++i)
                w[i] = uint8_t((w[i] + uint32_t(M[size_t(i) * sn + jc]) * v) % p);
        }
        for (uint32_t j = 0; j < n; ++j) {
            uint32_t code = 0;
            for (uint32_t a = s; a-- > 0;) code = code * p + w[j * s + a];
            out[j] = uint8_t(code);
        }
    }

    Fe unflatten_elem(const uint8_t* in) const {
        if (flat_identity_) {
            std::vector<uint8_t> coeffs(in, in + n);
            return Kn->from_coeffs(coeffs);
        }
        Fe acc = Kn->zero();
        for (uint32_t j = 0; j < n; ++j)
            if (in[j]) acc = acc + fq_embed_[in[j]] * zeta_pows_[j];
        return acc;
    }

    void flatten_vec(const std::vector<Fe>& v, uint8_t* out) const {
        require(v.size() == r, Err::AmbientMismatch, "vector arity mismatch");
        for (uint32_t i = 0; i < r; ++i) flatten_elem(v[i], out + size_t(i) * n);
    }

    std::vector<Fe> unflatten_row(const uint8_t* in) const {
        std::vector<Fe> v;
        v.reserve(r);
        for (uint32_t i = 0; i < r; ++i) v.push_back(unflatten_elem(in + size_t(i) * n));
        return v;
    }

    const Fe& fq_embed(uint8_t code) const { return fq_embed_[code]; }
    const Fe& zeta_pow(uint32_t j) const { return zeta_pows_[j]; }

    // --- field model tower V(r, q^n) ~ GF(q^(rn)) ---

    struct Tower {
        SpecPtr Krn;
        SubfieldMap emb;            // Kn -> Krn
        std::vector<Fe> eta_pows;   // eta^i, i < r, eta the Krn generator
        std::vector<Fe> scalar_emb; // GF(q) codes -> Krn
        FlatMat coord_inv;          // GF(p) matrix: Krn coeffs -> (coord, Kn-coeff) stack
        std::vector<uint8_t> frob_qn;  // x -> x^(q^n) as GF(p) matrix, (snr)^2
        uint64_t qn_exp;            // q^n
        uint32_t sn, srn;
        uint32_t p_;

        Fe to_field(const std::vector<Fe>& v) const {
            Fe acc = Krn->zero();
            for (size_t i = 0; i < v.size(); ++i) {
                if (v[i].is_zero()) continue;
                acc = acc + emb.embed(v[i]) * eta_pows[i];
            }
            return acc;
        }

        std::vector<Fe> from_field(const Fe& y) const {
            std::vector<uint8_t> u(srn, 0);
            for (uint32_t jc = 0; jc < srn; ++jc) {
                uint8_t v = y.coeff(jc);
                if (!v) continue;
                for (uint32_t i = 0; i < srn; ++i)
                    u[i] = uint8_t((u[i] + uint32_t(coord_inv.at(i, jc)) * v) % p_);
            }
            std::vector<Fe> out;
            const FieldSpec* kn = emb.src.get();
            for (uint32_t i = 0; i < srn / sn; ++i) {
                std::vector<uint8_t> coeffs(u.begin() + i * sn, u.begin() + (i + 1) * sn);
                out.push_back(kn->from_coeffs(coeffs));
            }
            return out;
        }

        Fe frob_qn_apply(const Fe& x) const {
            // result coeffs = frob_qn * x coeffs (column layout, GF(p))
            std::vector<uint8_t> acc(srn, 0);
            for (uint32_t jc = 0; jc < srn; ++jc) {
                uint8_t v = x.coeff(jc);
                if (!v) continue;
                const uint8_t* col = &frob_qn[size_t(jc) * srn];
                for (uint32_t i = 0; i < srn; ++i)
                    acc[i] = uint8_t((acc[i] + uint32_t(col[i]) * v) % p_);
            }
            std::vector<uint8_t> coeffs(acc.begin(), acc.end());
            return Krn->from_coeffs(coeffs);
        }

        // x^(q^n - 1) for nonzero x: the direction invariant of the line
        // through x in the vector model
        Fe dir_key(const Fe& x) const {
            if (Krn->has_tables()) return x.pow(qn_exp - 1);
            return frob_qn_apply(x) * x.inv();
        }
    };

    const Tower& tower() const;

  private:
    friend AmbPtr make_ambient(uint32_t, uint32_t, uint32_t, uint32_t);
    AmbientSpace() = default;

    bool flat_identity_ = false;
    std::vector<uint8_t> fq_coords_;  // s>1: GF(p) matrix, Kn coeffs -> basis coords
    std::vector<Fe> fq_embed_;        // GF(q) codes -> Kn
    std::vector<Fe> zeta_pows_;       // zeta^j, j < n

    mutable std::once_flag tower_once_;
    mutable std::unique_ptr<Tower> tower_;
};

namespace detail {
inline std::map<std::array<uint32_t, 4>, AmbPtr>& ambient_registry() {
    static std::map<std::array<uint32_t, 4>, AmbPtr> reg;
    return reg;
}
inline std::mutex& ambient_mutex() {
    static std::mutex mu;
    return mu;
}
}  // namespace detail

inline AmbPtr make_ambient(uint32_t p, uint32_t s, uint32_t n, uint32_t r) {
    auto amb = std::shared_ptr<AmbientSpace>(new AmbientSpace());
    amb->p = p;
    amb->s = s;
    amb->n = n;
    amb->r = r;
    require(r >= 1 && n >= 1 && s >= 1, Err::ParamError, "ambient parameters must be positive");
    amb->Fq = &SmallField::get(p, s);
    amb->q = amb->Fq->q;
    amb->Kn = FieldSpec::get(p, s * n);
    amb->qn = amb->Kn->order;
    amb->flat_dim = r * n;
    amb->zeta_pows_.reserve(n);
    Fe z = amb->Kn->gen(), cur = amb->Kn->one();
    for (uint32_t j = 0; j < n; ++j) {
        amb->zeta_pows_.push_back(cur);
        cur = cur * z;
    }
    amb->fq_embed_.reserve(amb->q);
    if (s == 1) {
        amb->flat_identity_ = true;
        for (uint64_t c = 0; c < amb->q; ++c) amb->fq_embed_.push_back(amb->Kn->from_int(c));
    } else {
        const auto& map = subfield_map(amb->Fq->spec, amb->Kn);
        for (uint64_t c = 0; c < amb->q; ++c)
            amb->fq_embed_.push_back(map.embed(amb->Fq->spec->from_code(c)));
        // basis {g^a zeta^j}: solve for coordinates via matrix inverse over GF(p)
        const uint32_t sn = s * n;
        const SmallField& Fp = SmallField::get(p, 1);
        FlatMat B(&Fp, sn, sn);
        for (uint32_t j = 0; j < n; ++j)
            for (uint32_t a = 0; a < s; ++a) {
                Fe e = map.gen_image.pow(a) * amb->zeta_pows_[j];
                for (uint32_t i = 0; i < sn; ++i) B.at(i, size_t(j) * s + a) = e.coeff(i);
            }
        FlatMat Binv = flat_inverse(B);
        amb->fq_coords_.assign(size_t(sn) * sn, 0);
        for (uint32_t i = 0; i < sn; ++i)
            for (uint32_t j = 0; j < sn; ++j) amb->fq_coords_[size_t(i) * sn + j] = Binv.at(i, j);
    }
    return amb;
}

inline AmbPtr AmbientSpace::get(uint32_t p, uint32_t s, uint32_t n, uint32_t r) {
    std::lock_guard<std::mutex> lock(detail::ambient_mutex());
    auto& reg = detail::ambient_registry();
    std::array<uint32_t, 4> key{p, s, n, r};
    auto it = reg.find(key);
    if (it != reg.end()) return it->second;
    AmbPtr amb = make_ambient(p, s, n, r);
    reg.emplace(key, amb);
    return amb;
}

inline const AmbientSpace::Tower& AmbientSpace::tower() const {
    std::call_once(tower_once_, [&] {
        u128 ord = 1;
        for (uint32_t i = 0; i < s * n * r; ++i) {
            ord *= p;
            require(ord < (u128(1) << 62), Err::MissingTowerConfig,
                    "field model order exceeds supported range");
        }
        auto tw = std::make_unique<Tower>();
        tw->Krn = FieldSpec::get(p, s * n * r);
        tw->emb = subfield_map(Kn, tw->Krn);
        tw->p_ = p;
        tw->sn = s * n;
        tw->srn = s * n * r;
        tw->qn_exp = qn;
        Fe eta = tw->Krn->gen(), cur = tw->Krn->one();
        for (uint32_t i = 0; i < r; ++i) {
            tw->eta_pows.push_back(cur);
            cur = cur * eta;
        }
        tw->scalar_emb.reserve(q);
        for (uint64_t c = 0; c < q; ++c) {
            Fe kn_val = fq_embed_[c];
            tw->scalar_emb.push_back(tw->emb.embed(kn_val));
        }
        // coordinate matrix: column (i*sn + c) = coeffs(emb(gen^c) * eta^i)
        const SmallField& Fp = SmallField::get(p, 1);
        FlatMat T(&Fp, tw->srn, tw->srn);
        Fe gen_img = tw->emb.gen_image;
        for (uint32_t i = 0; i < r; ++i) {
            Fe pw = tw->eta_pows[i];
            for (uint32_t c = 0; c < tw->sn; ++c) {
                for (uint32_t row = 0; row < tw->srn; ++row)
                    T.at(row, size_t(i) * tw->sn + c) = pw.coeff(row);
                pw = pw * gen_img;
            }
        }
        tw->coord_inv = flat_inverse(T);
        // q^n-power as a GF(p)-matrix on Krn
        tw->frob_qn.assign(size_t(tw->srn) * tw->srn, 0);
        Fe eta_qn = tw->Krn->gen().frob(s * n);  // gen^(q^n)
        Fe basis = tw->Krn->one();
        for (uint32_t c = 0; c < tw->srn; ++c) {
            for (uint32_t i = 0; i < tw->srn; ++i)
                tw->frob_qn[size_t(c) * tw->srn + i] = basis.coeff(i);
            basis = basis * eta_qn;
        }
        tower_ = std::move(tw);
    });
    return *tower_;
}

// --- subspaces ---

class FqnSubspace;

class FqSubspace {
  public:
    FqSubspace() = default;
    FqSubspace(AmbPtr amb, FlatMat canonical) : amb_(std::move(amb)), flat_(std::move(canonical)) {}

    const AmbPtr& amb() const { return amb_; }
    const FlatMat& flat() const { return flat_; }
    size_t dim() const { return flat_.rows; }

    std::vector<Fe> basis_vector(size_t i) const { return amb_->unflatten_row(flat_.row_ptr(i)); }

    bool contains_flat(const uint8_t* row) const {
        Eliminator e;
        e.set_base(flat_);
        std::vector<uint8_t> scratch(row, row + flat_.cols);
        return !e.add_row(scratch.data());
    }
    bool contains(const std::vector<Fe>& vec) const {
        std::vector<uint8_t> row(amb_->flat_dim);
        amb_->flatten_vec(vec, row.data());
        return contains_flat(row.data());
    }

    bool operator==(const FqSubspace& o) const {
        return amb_.get() == o.amb_.get() && flat_ == o.flat_;
    }

  private:
    AmbPtr amb_;
    FlatMat flat_;
};

class FqnSubspace {
  public:
    FqnSubspace() = default;
    FqnSubspace(AmbPtr amb, Mat canonical) : amb_(std::move(amb)), basis_(std::move(canonical)) {}

    const AmbPtr& amb() const { return amb_; }
    const Mat& basis() const { return basis_; }
    size_t dim() const { return basis_.rows(); }
    std::vector<Fe> basis_vector(size_t i) const { return basis_.row(i); }

    bool operator==(const FqnSubspace& o) const {
        return amb_.get() == o.amb_.get() && basis_ == o.basis_;
    }

  private:
    AmbPtr amb_;
    Mat basis_;  // h x r over Kn, RREF with zero rows dropped
};

inline FqSubspace fq_span_flat(const AmbPtr& amb, FlatMat rows) {
    require(rows.cols == amb->flat_dim, Err::AmbientMismatch, "flat width mismatch");
    flat_rref(rows);
    return FqSubspace(amb, std::move(rows));
}

inline FqSubspace whole_space(const AmbPtr& amb) {
    FlatMat rows(amb->Fq, amb->flat_dim, amb->flat_dim);
    for (uint32_t i = 0; i < amb->flat_dim; ++i) rows.at(i, i) = 1;
    return FqSubspace(amb, std::move(rows));
}

inline FqSubspace zero_subspace(const AmbPtr& amb) {
    return FqSubspace(amb, FlatMat(amb->Fq, 0, amb->flat_dim));
}

inline FqSubspace fq_span(const AmbPtr& amb, const std::vector<std::vector<Fe>>& vectors) {
    FlatMat rows(amb->Fq, vectors.size(), amb->flat_dim);
    for (size_t i = 0; i < vectors.size(); ++i) amb->flatten_vec(vectors[i], rows.row_ptr(i));
    return fq_span_flat(amb, std::move(rows));
}

inline Mat kn_rref_canonical(Mat A) {
    auto rr = rref(std::move(A));
    Mat out(rr.R.spec(), 0, rr.R.cols());
    for (size_t i = 0; i < rr.rank; ++i) out.append_row(rr.R.row(i));
    return out;
}

inline FqnSubspace fqn_span(const AmbPtr& amb, const std::vector<std::vector<Fe>>& vectors) {
    Mat m(amb->Kn.get(), 0, amb->r);
    for (const auto& v : vectors) {
        require(v.size() == amb->r, Err::AmbientMismatch, "vector arity mismatch");
        m.append_row(v);
    }
    return FqnSubspace(amb, kn_rref_canonical(std::move(m)));
}

// dimension over GF(q^n) of the span of U's vectors
inline size_t fqn_span_dim(const FqSubspace& U) {
    const AmbPtr& amb = U.amb();
    Mat m(amb->Kn.get(), 0, amb->r);
    for (size_t i = 0; i < U.dim(); ++i) m.append_row(U.basis_vector(i));
    return rref(std::move(m)).rank;
}

// the GF(q)-subspace underlying a GF(q^n)-subspace: dimension n * dim W
inline FqSubspace expand(const FqnSubspace& W) {
    const AmbPtr& amb = W.amb();
    FlatMat rows(amb->Fq, W.dim() * amb->n, amb->flat_dim);
    size_t ri = 0;
    Fe zeta = amb->Kn->gen();
    for (size_t i = 0; i < W.dim(); ++i) {
        std::vector<Fe> cur = W.basis_vector(i);
        for (uint32_t j = 0; j < amb->n; ++j) {
            amb->flatten_vec(cur, rows.row_ptr(ri++));
            if (j + 1 < amb->n)
                for (auto& x : cur) x = x * zeta;
        }
    }
    return fq_span_flat(amb, std::move(rows));
}

// fill scratch (h*n rows of flat_dim codes) with the expansion of basis rows;
// avoids allocation in sweeps
inline void expand_rows_into(const AmbPtr& amb, const Mat& basis, uint8_t* scratch,
                             std::vector<Fe>& tmp) {
    Fe zeta = amb->Kn->gen();
    size_t row_len = amb->flat_dim;
    size_t ri = 0;
    for (size_t i = 0; i < basis.rows(); ++i) {
        tmp = basis.row(i);
        for (uint32_t j = 0; j < amb->n; ++j) {
            amb->flatten_vec(tmp, scratch + (ri++) * row_len);
            if (j + 1 < amb->n)
                for (auto& x : tmp) x = x * zeta;
        }
    }
}

inline std::vector<Fe> to_field_model(const FqSubspace& U) {
    const auto& tw = U.amb()->tower();
    std::vector<Fe> out;
    out.reserve(U.dim());
    for (size_t i = 0; i < U.dim(); ++i) out.push_back(tw.to_field(U.basis_vector(i)));
    return out;
}

inline FqSubspace from_field_model(const AmbPtr& amb, const std::vector<Fe>& elems) {
    const auto& tw = amb->tower();
    std::vector<std::vector<Fe>> vecs;
    vecs.reserve(elems.size());
    for (const auto& y : elems) {
        require(y.spec() == tw.Krn.get(), Err::SpecMismatch, "element not in the model field");
        vecs.push_back(tw.from_field(y));
    }
    return fq_span(amb, vecs);
}

// --- enumeration of h-dimensional GF(q^n)-subspaces ---

inline u128 gaussian_binomial(u128 Q, uint32_t r, uint32_t h) {
    require(h <= r, Err::ParamError, "gaussian binomial needs h <= r");
    u128 res = 1;
    const u128 cap = u128(1) << 100;
    auto qpow = [&](uint32_t e) {
        u128 v = 1;
        for (uint32_t i = 0; i < e; ++i) {
            v *= Q;
            require(v < cap, Err::ParamError, "gaussian binomial overflow");
        }
        return v;
    };
    for (uint32_t i = 1; i <= h; ++i) {
        u128 num = qpow(r - h + i) - 1;
        u128 den = qpow(i) - 1;
        require(res < cap / num, Err::ParamError, "gaussian binomial overflow");
        res = res * num;
        require(res % den == 0, Err::ParamError, "gaussian binomial divisibility");
        res /= den;
    }
    return res;
}

// Canonical order: pivot-column patterns in ascending lexicographic order,
// then free entries as an odometer over element codes, first-listed free
// position (row-major) most significant.
class HEnum {
  public:
    HEnum(AmbPtr amb, uint32_t h) : amb_(std::move(amb)), h_(h) {
        require(h_ >= 1 && h_ <= amb_->r, Err::ParamError, "h out of range");
        total_ = gaussian_binomial(amb_->qn, amb_->r, h_);
        comb_.resize(h_);
        load_pattern_first();
        pos_ = 0;
    }

    u128 total() const { return total_; }
    u128 position() const { return pos_; }

    void seek(u128 idx) {
        require(idx <= total_, Err::ParamError, "seek past end");
        load_pattern_first();
        pos_ = idx;
        if (idx == total_) return;
        while (idx >= pattern_count_) {
            idx -= pattern_count_;
            advance_pattern();
        }
        offset_ = idx;
    }

    // fills out (h x r over Kn); returns false when exhausted
    bool next(Mat& out) {
        if (pos_ >= total_) return false;
        if (offset_ >= pattern_count_) {
            advance_pattern();
            offset_ = 0;
        }
        materialize(out);
        ++offset_;
        ++pos_;
        return true;
    }

  private:
    void load_pattern_first() {
        for (uint32_t i = 0; i < h_; ++i) comb_[i] = i;
        offset_ = 0;
        recompute_pattern();
    }

    void advance_pattern() {
        // next combination in lexicographic order
        uint32_t r = amb_->r;
        int i = int(h_) - 1;
        while (i >= 0 && comb_[size_t(i)] == r - h_ + uint32_t(i)) --i;
        require(i >= 0, Err::ParamError, "pattern advance past end");
        ++comb_[size_t(i)];
        for (uint32_t k = uint32_t(i) + 1; k < h_; ++k) comb_[k] = comb_[k - 1] + 1;
        recompute_pattern();
    }

    void recompute_pattern() {
        free_pos_.clear();
        std::vector<char> is_pivot(amb_->r, 0);
        for (uint32_t c : comb_) is_pivot[c] = 1;
        for (uint32_t i = 0; i < h_; ++i)
            for (uint32_t j = comb_[i] + 1; j < amb_->r; ++j)
                if (!is_pivot[j]) free_pos_.emplace_back(i, j);
        pattern_count_ = 1;
        for (size_t k = 0; k < free_pos_.size(); ++k) pattern_count_ *= amb_->qn;
    }

    void materialize(Mat& out) {
        const FieldSpec* kn = amb_->Kn.get();
        if (out.rows() != h_ || out.cols() != amb_->r) out = Mat(kn, h_, amb_->r);
        for (uint32_t i = 0; i < h_; ++i)
            for (uint32_t j = 0; j < amb_->r; ++j) out.at(i, j) = kn->zero();
        for (uint32_t i = 0; i < h_; ++i) out.at(i, comb_[i]) = kn->one();
        u128 rem = offset_;
        for (size_t k = free_pos_.size(); k-- > 0;) {
            uint64_t digit = uint64_t(rem % amb_->qn);
            rem /= amb_->qn;
            out.at(free_pos_[k].first, free_pos_[k].second) = kn->from_code(digit);
        }
    }

    AmbPtr amb_;
    uint32_t h_;
    u128 total_ = 0, pos_ = 0, offset_ = 0, pattern_count_ = 0;
    std::vector<uint32_t> comb_;
    std::vector<std::pair<uint32_t, uint32_t>> free_pos_;
};

template <class Fn>
inline void enumerate_h_subspaces(const AmbPtr& amb, uint32_t h, uint64_t budget, Fn&& fn) {
    u128 total = gaussian_binomial(amb->qn, amb->r, h);
    require(total <= u128(budget), Err::BudgetExceeded,
            "subspace enumeration larger than budget");
    HEnum en(amb, h);
    Mat basis;
    while (en.next(basis)) fn(FqnSubspace(amb, basis));
}

inline u128 count_h_subspaces(const AmbPtr& amb, uint32_t h) {
    return gaussian_binomial(amb->qn, amb->r, h);
}

}  // namespace evasive
