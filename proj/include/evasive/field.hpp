#pragma once

// Exact arithmetic in GF(p^m), elements stored as dense coefficient vectors
// over GF(p) modulo a monic irreducible. Small fields (p^m <= 2^16) carry
// log/exp tables over a primitive element; characteristic 2 uses a bit-packed
// multiply; everything else runs schoolbook + reduction.

#include <array>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "evasive/error.hpp"
#include "evasive/fp_poly.hpp"
#include "evasive/util.hpp"

namespace evasive {

class Fe;

class FieldSpec {
  public:
    static constexpr uint32_t kCapDeg = 64;
    static constexpr uint64_t kTableLimit = 1u << 16;

    uint32_t p;
    uint32_t m;
    std::vector<uint8_t> modulus;  // ascending, size m+1, monic
    uint64_t order;                // p^m
    uint64_t group_order;          // p^m - 1

    // Shared spec for GF(p^m) with the canonical modulus: the fixed presets
    // for (p, m) = (2|3|5, 15), otherwise the first irreducible in
    // lexicographic coefficient order.
    static std::shared_ptr<const FieldSpec> get(uint32_t p, uint32_t m);
    // Shared spec with an explicit monic irreducible modulus.
    static std::shared_ptr<const FieldSpec> get(uint32_t p, const std::vector<uint8_t>& modulus);
    static std::shared_ptr<const FieldSpec> preset15(uint32_t p);
    static std::vector<uint8_t> preset15_modulus(uint32_t p);

    Fe zero() const;
    Fe one() const;
    Fe gen() const;  // class of x
    Fe from_coeffs(const std::vector<uint8_t>& coeffs) const;
    Fe from_code(uint64_t code) const;  // code = sum c_i p^i
    Fe from_int(uint64_t v) const;      // prime-subfield element v mod p

    bool has_tables() const { return has_tables_; }
    const std::vector<uint8_t>& frob_matrix() const { return frobmat_; }
    const std::vector<std::pair<uint64_t, uint32_t>>& group_order_factors() const;

    bool same(const FieldSpec& o) const {
        return p == o.p && m == o.m && modulus == o.modulus;
    }

  private:
    friend class Fe;
    FieldSpec(uint32_t p_, std::vector<uint8_t> mod_);
    void build_tables();
    void build_frobmat();

    bool has_tables_ = false;
    std::vector<uint32_t> exp_;  // k -> code of g^k, size group_order
    std::vector<int32_t> log_;   // code -> k, -1 at 0, size order
    uint32_t table_gen_code_ = 0;
    std::vector<uint8_t> frobmat_;  // m x m row-major, column j = coeffs of basis_j^p
    uint64_t mod_bits_ = 0;         // p == 2 only: modulus packed into bits 0..m

    mutable std::once_flag factors_once_;
    mutable std::vector<std::pair<uint64_t, uint32_t>> factors_;
};

using SpecPtr = std::shared_ptr<const FieldSpec>;

class Fe {
  public:
    Fe() = default;

    const FieldSpec* spec() const { return f_; }

    bool is_zero() const {
        for (uint32_t i = 0; i < f_->m; ++i)
            if (c_[i]) return false;
        return true;
    }
    bool is_one() const {
        if (c_[0] != 1) return false;
        for (uint32_t i = 1; i < f_->m; ++i)
            if (c_[i]) return false;
        return true;
    }

    uint8_t coeff(uint32_t i) const { return c_[i]; }
    std::vector<uint8_t> coeffs() const { return {c_.begin(), c_.begin() + f_->m}; }

    uint64_t code() const {
        uint64_t v = 0;
        for (uint32_t i = f_->m; i-- > 0;) v = v * f_->p + c_[i];
        return v;
    }

    bool operator==(const Fe& o) const {
        check_same(o);
        return std::memcmp(c_.data(), o.c_.data(), f_->m) == 0;
    }
    bool operator!=(const Fe& o) const { return !(*this == o); }

    // total order used wherever a deterministic element ordering is required
    bool operator<(const Fe& o) const {
        check_same(o);
        for (uint32_t i = f_->m; i-- > 0;) {
            if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
        }
        return false;
    }

    Fe operator+(const Fe& o) const {
        check_same(o);
        Fe r(*this);
        const uint32_t p = f_->p;
        for (uint32_t i = 0; i < f_->m; ++i) {
            uint8_t s = uint8_t(r.c_[i] + o.c_[i]);
            r.c_[i] = s >= p ? uint8_t(s - p) : s;
        }
        return r;
    }
    Fe operator-(const Fe& o) const {
        check_same(o);
        Fe r(*this);
        const uint32_t p = f_->p;
        for (uint32_t i = 0; i < f_->m; ++i) {
            uint8_t s = uint8_t(r.c_[i] + p - o.c_[i]);
            r.c_[i] = s >= p ? uint8_t(s - p) : s;
        }
        return r;
    }
    Fe operator-() const {
        Fe r(*this);
        const uint32_t p = f_->p;
        for (uint32_t i = 0; i < f_->m; ++i) r.c_[i] = c_[i] ? uint8_t(p - c_[i]) : 0;
        return r;
    }

    Fe operator*(const Fe& o) const {
        check_same(o);
        if (f_->has_tables_) {
            int32_t la = f_->log_[code()];
            int32_t lb = f_->log_[o.code()];
            if (la < 0 || lb < 0) return f_->zero();
            uint64_t k = (uint64_t(la) + uint64_t(lb)) % f_->group_order;
            return f_->from_code(f_->exp_[k]);
        }
        if (f_->p == 2) return mul2(o);
        return mul_generic(o);
    }

    Fe inv() const {
        require(!is_zero(), Err::DivisionByZero, "inverse of zero");
        if (f_->has_tables_) {
            int32_t l = f_->log_[code()];
            uint64_t k = (f_->group_order - uint64_t(l)) % f_->group_order;
            return f_->from_code(f_->exp_[k]);
        }
        fp::Poly a = coeffs_poly();
        fp::Poly u = fp::invmod(a, f_->modulus, f_->p);
        return f_->from_coeffs(u);
    }

    Fe operator/(const Fe& o) const { return *this * o.inv(); }

    // x^e with e an ordinary integer exponent (not reduced by the caller)
    Fe pow(uint64_t e) const {
        if (is_zero()) return e == 0 ? f_->one() : *this;
        if (f_->has_tables_) {
            uint64_t n = f_->group_order;
            uint64_t k = (uint64_t(f_->log_[code()]) % n) * (e % n) % n;
            return f_->from_code(f_->exp_[k]);
        }
        Fe base(*this), r = f_->one();
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // x^(p^j)
    Fe frob(uint32_t j) const {
        if (j == 0) return *this;
        if (f_->has_tables_) {
            if (is_zero()) return *this;
            uint64_t n = f_->group_order;
            uint64_t pj = 1;
            for (uint32_t i = 0; i < j; ++i) pj = pj * f_->p % n;
            uint64_t k = uint64_t(f_->log_[code()]) * pj % n;
            return f_->from_code(f_->exp_[k]);
        }
        Fe r(*this);
        for (uint32_t i = 0; i < j; ++i) r = r.frob1();
        return r;
    }

    // x^p via the cached GF(p)-linear matrix
    Fe frob1() const {
        const auto& M = f_->frobmat_;
        const uint32_t m = f_->m, p = f_->p;
        Fe r = f_->zero();
        for (uint32_t jc = 0; jc < m; ++jc) {
            uint8_t v = c_[jc];
            if (!v) continue;
            const uint8_t* col = &M[size_t(jc) * m];
            for (uint32_t i = 0; i < m; ++i) r.c_[i] = uint8_t((r.c_[i] + uint32_t(col[i]) * v) % p);
        }
        return r;
    }

    const uint8_t* raw() const { return c_.data(); }

  private:
    friend class FieldSpec;
    explicit Fe(const FieldSpec* f) : f_(f) { c_.fill(0); }

    void check_same(const Fe& o) const {
        require(f_ == o.f_, Err::SpecMismatch, "elements from different field specs");
    }

    fp::Poly coeffs_poly() const {
        fp::Poly a(c_.begin(), c_.begin() + f_->m);
        fp::trim(a);
        return a;
    }

    Fe mul2(const Fe& o) const {
        const uint32_t m = f_->m;
        uint64_t a = 0, b = 0;
        for (uint32_t i = 0; i < m; ++i) {
            a |= uint64_t(c_[i]) << i;
            b |= uint64_t(o.c_[i]) << i;
        }
        u128 acc = 0;
        while (a) {
            uint32_t i = uint32_t(__builtin_ctzll(a));
            acc ^= u128(b) << i;
            a &= a - 1;
        }
        const u128 mask = u128(f_->mod_bits_);
        for (int i = int(2 * m - 2); i >= int(m); --i) {
            if ((acc >> i) & 1) acc ^= mask << (i - int(m));
        }
        Fe r(f_);
        for (uint32_t i = 0; i < m; ++i) r.c_[i] = uint8_t((acc >> i) & 1);
        return r;
    }

    Fe mul_generic(const Fe& o) const {
        const uint32_t m = f_->m, p = f_->p;
        uint32_t acc[2 * FieldSpec::kCapDeg] = {0};
        for (uint32_t i = 0; i < m; ++i) {
            uint32_t v = c_[i];
            if (!v) continue;
            for (uint32_t j = 0; j < m; ++j) acc[i + j] += v * o.c_[j];
        }
        for (uint32_t i = 0; i < 2 * m - 1; ++i) acc[i] %= p;
        const auto& mod = f_->modulus;
        for (uint32_t i = 2 * m - 2; i + 1 > m; --i) {
            uint32_t c = acc[i];
            if (c) {
                for (uint32_t j = 0; j < m; ++j)
                    acc[i - m + j] = (acc[i - m + j] + c * (p - mod[j])) % p;
            }
        }
        Fe r(f_);
        for (uint32_t i = 0; i < m; ++i) r.c_[i] = uint8_t(acc[i]);
        return r;
    }

    const FieldSpec* f_ = nullptr;
    std::array<uint8_t, FieldSpec::kCapDeg> c_{};
};

// --- FieldSpec implementation ---

inline FieldSpec::FieldSpec(uint32_t p_, std::vector<uint8_t> mod_) : p(p_), modulus(std::move(mod_)) {
    require(p >= 2, Err::ParamError, "p must be a prime >= 2");
    for (uint32_t d = 2; d * d <= p; ++d) require(p % d, Err::ParamError, "p must be prime");
    require(modulus.size() >= 2 && modulus.back() == 1, Err::ParamError, "monic modulus required");
    m = uint32_t(modulus.size() - 1);
    require(m <= kCapDeg, Err::ParamError, "extension degree beyond element capacity");
    for (auto c : modulus) require(c < p, Err::ParamError, "modulus coefficients must be reduced mod p");
    require(fp::is_irreducible(modulus, p), Err::ParamError, "modulus is reducible");
    u128 ord = 1;
    for (uint32_t i = 0; i < m; ++i) {
        ord *= p;
        require(ord < (u128(1) << 62), Err::ParamError, "field order exceeds 2^62");
    }
    order = uint64_t(ord);
    group_order = order - 1;
    if (p == 2) {
        for (uint32_t i = 0; i <= m; ++i) mod_bits_ |= uint64_t(modulus[i]) << i;
    }
    build_frobmat();
    if (order <= kTableLimit) build_tables();
}

inline Fe FieldSpec::zero() const { return Fe(this); }

inline Fe FieldSpec::one() const {
    Fe r(this);
    r.c_[0] = 1;
    return r;
}

inline Fe FieldSpec::gen() const {
    Fe r(this);
    if (m == 1) {
        // x reduces to -modulus[0] in the degree-1 case
        r.c_[0] = uint8_t((p - modulus[0]) % p);
    } else {
        r.c_[1] = 1;
    }
    return r;
}

inline Fe FieldSpec::from_coeffs(const std::vector<uint8_t>& coeffs) const {
    require(coeffs.size() <= m, Err::ParamError, "too many coefficients for this field");
    Fe r(this);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        require(coeffs[i] < p, Err::ParamError, "coefficient not reduced mod p");
        r.c_[i] = coeffs[i];
    }
    return r;
}

inline Fe FieldSpec::from_code(uint64_t code) const {
    Fe r(this);
    for (uint32_t i = 0; i < m && code; ++i) {
        r.c_[i] = uint8_t(code % p);
        code /= p;
    }
    require(code == 0, Err::ParamError, "code out of range");
    return r;
}

inline Fe FieldSpec::from_int(uint64_t v) const {
    Fe r(this);
    r.c_[0] = uint8_t(v % p);
    return r;
}

inline void FieldSpec::build_frobmat() {
    frobmat_.assign(size_t(m) * m, 0);
    // column j = coeffs of (x^j)^p mod f, built by repeated multiplication
    Fe xp = one();
    {
        // x^p mod f via square-and-multiply on the generator
        Fe g = gen();
        Fe base = g, r = one();
        uint64_t e = p;
        while (e) {
            if (e & 1) r = r.mul_generic(base);
            base = base.mul_generic(base);
            e >>= 1;
        }
        xp = r;
    }
    Fe cur = one();
    for (uint32_t j = 0; j < m; ++j) {
        for (uint32_t i = 0; i < m; ++i) frobmat_[size_t(j) * m + i] = cur.c_[i];
        cur = cur.mul_generic(xp);
    }
}

inline void FieldSpec::build_tables() {
    // need a primitive element: scan codes ascending, order test via the
    // factored group order
    auto factors = factorize_u64(group_order);
    auto is_primitive_code = [&](uint64_t code) {
        Fe x = from_code(code);
        if (x.is_zero()) return false;
        for (auto& [l, e] : factors) {
            Fe t = x;
            // t^(group_order / l) via generic square-multiply
            uint64_t ex = group_order / l;
            Fe base = t, r = one();
            while (ex) {
                if (ex & 1) r = r.mul_generic(base);
                base = base.mul_generic(base);
                ex >>= 1;
            }
            if (r.is_one()) return false;
        }
        return true;
    };
    uint64_t gcode = 0;
    uint64_t xcode = gen().code();
    if (is_primitive_code(xcode)) {
        gcode = xcode;
    } else {
        for (uint64_t c = 1; c < order; ++c) {
            if (c == xcode) continue;
            if (is_primitive_code(c)) {
                gcode = c;
                break;
            }
        }
    }
    require(gcode != 0, Err::ParamError, "no primitive element found");
    table_gen_code_ = uint32_t(gcode);
    exp_.assign(group_order, 0);
    log_.assign(order, -1);
    Fe g = from_code(gcode), cur = one();
    for (uint64_t k = 0; k < group_order; ++k) {
        uint64_t code = cur.code();
        exp_[k] = uint32_t(code);
        log_[code] = int32_t(k);
        cur = cur.mul_generic(g);
    }
    require(cur.is_one(), Err::ParamError, "table generator order mismatch");
    has_tables_ = true;
}

inline const std::vector<std::pair<uint64_t, uint32_t>>& FieldSpec::group_order_factors() const {
    std::call_once(factors_once_, [&] { factors_ = factorize_u64(group_order); });
    return factors_;
}

namespace detail {
inline std::map<std::pair<uint32_t, std::vector<uint8_t>>, std::shared_ptr<const FieldSpec>>&
spec_registry() {
    static std::map<std::pair<uint32_t, std::vector<uint8_t>>, std::shared_ptr<const FieldSpec>> reg;
    return reg;
}
inline std::mutex& spec_registry_mutex() {
    static std::mutex mu;
    return mu;
}
}  // namespace detail

inline std::vector<uint8_t> FieldSpec::preset15_modulus(uint32_t p) {
    // x^15 + x^5 + x^4 + x^2 + 1                          (p = 2)
    // x^15 + 2x^8 + x^5 + 2x^2 + x + 1                    (p = 3)
    // x^15 + 2x^5 + 3x^3 + 3x^2 + 4x + 3                  (p = 5)
    switch (p) {
        case 2: return {1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
        case 3: return {1, 1, 2, 0, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 1};
        case 5: return {3, 4, 3, 3, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
        default: fail(Err::ParamError, "no degree-15 preset for this characteristic");
    }
}

inline std::shared_ptr<const FieldSpec> FieldSpec::get(uint32_t p, const std::vector<uint8_t>& modulus) {
    std::lock_guard<std::mutex> lock(detail::spec_registry_mutex());
    auto key = std::make_pair(p, modulus);
    auto& reg = detail::spec_registry();
    auto it = reg.find(key);
    if (it != reg.end()) return it->second;
    auto sp = std::shared_ptr<const FieldSpec>(new FieldSpec(p, modulus));
    reg.emplace(std::move(key), sp);
    return sp;
}

inline std::shared_ptr<const FieldSpec> FieldSpec::get(uint32_t p, uint32_t m) {
    if (m == 15 && (p == 2 || p == 3 || p == 5)) return get(p, preset15_modulus(p));
    return get(p, fp::lex_first_irreducible(p, m));
}

inline std::shared_ptr<const FieldSpec> FieldSpec::preset15(uint32_t p) {
    return get(p, preset15_modulus(p));
}

// --- element-level helpers ---

// Tr_{GF(q^n) -> GF(q)}(x) = sum x^(q^i), i < n; q = p^s must define a
// subfield tower GF(q) <= GF(q^n) <= spec.
inline Fe rel_trace(const Fe& x, uint64_t q, uint32_t n) {
    const FieldSpec* f = x.spec();
    uint32_t s = 0;
    uint64_t t = q;
    while (t > 1 && t % f->p == 0) {
        t /= f->p;
        ++s;
    }
    require(t == 1 && s >= 1, Err::SpecMismatch, "q is not a power of the field characteristic");
    require(uint64_t(s) * n <= f->m && f->m % (uint64_t(s) * n) == 0, Err::SpecMismatch,
            "GF(q^n) is not a subfield of the spec");
    Fe acc = x, y = x;
    for (uint32_t i = 1; i < n; ++i) {
        y = y.frob(s);
        acc = acc + y;
    }
    return acc;
}

inline uint64_t element_order(const Fe& x) {
    require(!x.is_zero(), Err::ZeroElement, "order of zero is undefined");
    const FieldSpec* f = x.spec();
    uint64_t ord = f->group_order;
    if (ord == 0) return 1;
    for (auto& [l, e] : f->group_order_factors()) {
        for (uint32_t i = 0; i < e; ++i) {
            if (ord % l) break;
            if (x.pow(ord / l).is_one())
                ord /= l;
            else
                break;
        }
    }
    return ord;
}

inline bool is_primitive(const Fe& x) {
    if (x.is_zero()) return false;
    const FieldSpec* f = x.spec();
    for (auto& [l, e] : f->group_order_factors()) {
        if (x.pow(f->group_order / l).is_one()) return false;
    }
    return f->group_order >= 1;
}

inline uint64_t fe_hash(const Fe& x, uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a64(x.raw(), x.spec()->m, h);
}

}  // namespace evasive
