#pragma once

// Linearized (q-)polynomials acting on F_(q^15), the two-step construction
// R -> P of a q-degree-7 kernel polynomial from a pair (a, b), and the
// truncated subresultant matrices whose determinants decide whether ker P
// meets a q^5-power fiber in more than a line.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "evasive/error.hpp"
#include "evasive/field.hpp"
#include "evasive/linalg.hpp"
#include "evasive/smallfield.hpp"
#include "evasive/subfield.hpp"
#include "evasive/util.hpp"

namespace evasive {

// sum_i alphas[i] * x^(q^i) with q = p^s, an F_q-linear map on its field.
struct QPoly {
    const FieldSpec* spec = nullptr;
    uint32_t p = 0;
    uint32_t s = 1;
    std::vector<Fe> alphas;

    uint64_t q() const { return ipow_u64(p, s); }

    Fe eval(const Fe& x) const {
        Fe acc = spec->zero();
        Fe y = x;
        for (size_t i = 0; i < alphas.size(); ++i) {
            if (i) y = y.frob(s);
            if (!alphas[i].is_zero()) acc = acc + alphas[i] * y;
        }
        return acc;
    }

    uint32_t qdeg() const {
        for (size_t i = alphas.size(); i-- > 0;)
            if (!alphas[i].is_zero()) return static_cast<uint32_t>(i);
        fail(Err::ZeroPolynomial, "qdeg of the zero q-polynomial");
    }
};

namespace detail {

inline uint32_t qpoly_subdeg(const Fe& a) {
    const FieldSpec* f = a.spec();
    require(f->m % 15 == 0, Err::ParamError,
            "q-polynomial routines expect a field of degree 15s");
    return f->m / 15;
}

}  // namespace detail

// R(x) = r6 x^(q^6) + r3 x^(q^3) + r0 x, the q^3-linearized polynomial with
// ker R = <a, b> over F_(q^3).  Requires a^(q^3) b != a b^(q^3), i.e. a, b
// F_(q^3)-independent.
inline QPoly build_R(const Fe& a, const Fe& b) {
    require(a.spec() == b.spec(), Err::AmbientMismatch, "build_R: mixed fields");
    uint32_t s = detail::qpoly_subdeg(a);
    const FieldSpec* f = a.spec();
    Fe a3 = a.frob(3 * s), b3 = b.frob(3 * s);
    Fe a6 = a3.frob(3 * s), b6 = b3.frob(3 * s);
    Fe r6 = a * b3 - a3 * b;
    require(!r6.is_zero(), Err::DependentPair,
            "build_R: a, b dependent over F_(q^3)");
    QPoly R;
    R.spec = f;
    R.p = f->p;
    R.s = s;
    R.alphas.assign(7, f->zero());
    R.alphas[0] = a3 * b6 - a6 * b3;
    R.alphas[3] = a6 * b - a * b6;
    R.alphas[6] = r6;
    return R;
}

struct KernelPoly {
    QPoly P;
    QPoly R;
    Fe c;  // R(xbar), the scaling constant
};

// P(x) = c R(x)^q - c^q R(x) with c = R(xbar).  P has q-degree 7,
// alpha_2 = alpha_5 = 0, and ker P = <ker R, xbar> of F_q-dimension 7.
inline KernelPoly build_P(const Fe& a, const Fe& b, const Fe& xbar) {
    QPoly R = build_R(a, b);
    Fe c = R.eval(xbar);
    require(!c.is_zero(), Err::XbarInKernel, "build_P: xbar lies in ker R");
    const FieldSpec* f = R.spec;
    uint32_t s = R.s;
    Fe cq = c.frob(s);
    QPoly P;
    P.spec = f;
    P.p = R.p;
    P.s = s;
    P.alphas.assign(8, f->zero());
    for (uint32_t i : {0u, 3u, 6u}) {
        P.alphas[i] = P.alphas[i] - cq * R.alphas[i];
        P.alphas[i + 1] = P.alphas[i + 1] + c * R.alphas[i].frob(s);
    }
    return {P, R, c};
}

// Matrix of P as an F_p-linear map in the polynomial basis of its field;
// column j holds the coefficients of P(x^j).
inline FlatMat qpoly_fp_matrix(const QPoly& P) {
    const FieldSpec* f = P.spec;
    const SmallField& Fp = SmallField::get(f->p, 1);
    FlatMat M(&Fp, f->m, f->m);
    std::vector<uint8_t> e(f->m, 0);
    for (uint32_t j = 0; j < f->m; ++j) {
        e[j] = 1;
        Fe img = P.eval(f->from_coeffs(e));
        e[j] = 0;
        for (uint32_t i = 0; i < f->m; ++i) M.at(i, j) = img.coeff(i);
    }
    return M;
}

// F_q-basis of ker P.  The F_p-nullity must be a multiple of s; the basis is
// extracted greedily, closing each new vector under multiplication by a
// generator of the F_q-subfield.
inline std::vector<Fe> qpoly_kernel_basis(const QPoly& P) {
    const FieldSpec* f = P.spec;
    FlatMat K = flat_kernel(qpoly_fp_matrix(P));
    uint32_t s = P.s;
    require(K.rows % s == 0, Err::SpecMismatch,
            "kernel is not an F_q-subspace");
    std::vector<Fe> elems;
    elems.reserve(K.rows);
    std::vector<uint8_t> cf(f->m);
    for (size_t i = 0; i < K.rows; ++i) {
        const uint8_t* r = K.row_ptr(i);
        cf.assign(r, r + f->m);
        elems.push_back(f->from_coeffs(cf));
    }
    if (s == 1) return elems;

    Fe w = subfield_map(FieldSpec::get(f->p, s), FieldSpec::get(f->p, f->m))
               .gen_image;
    const SmallField& Fp = SmallField::get(f->p, 1);
    Eliminator elim;
    elim.init(&Fp, f->m);
    std::vector<Fe> basis;
    std::vector<uint8_t> row(f->m);
    auto push = [&](const Fe& x) {
        for (uint32_t i = 0; i < f->m; ++i) row[i] = x.coeff(i);
        return elim.add_row(row.data());
    };
    for (const Fe& e0 : elems) {
        if (!push(e0)) continue;
        basis.push_back(e0);
        Fe y = e0;
        for (uint32_t a = 1; a < s; ++a) {
            y = y * w;
            push(y);
        }
    }
    require(basis.size() * s == K.rows, Err::SpecMismatch,
            "F_q-basis extraction failed");
    return basis;
}

// Interpolated q-polynomial with the given F_q-subspace as kernel:
// start from x and fold in one basis vector at a time via
// P <- P^q - P(b)^(q-1) P.
inline QPoly qpoly_of_subspace(const FieldSpec* f, uint32_t s,
                               const std::vector<Fe>& basis) {
    require(f->m % s == 0, Err::ParamError, "subfield degree must divide m");
    QPoly P;
    P.spec = f;
    P.p = f->p;
    P.s = s;
    P.alphas.assign(1, f->one());
    for (const Fe& b : basis) {
        Fe t = P.eval(b);
        require(!t.is_zero(), Err::ParamError,
                "qpoly_of_subspace: dependent basis vector");
        Fe tq1 = t.frob(s) / t;
        std::vector<Fe> next(P.alphas.size() + 1, f->zero());
        for (size_t i = 0; i < P.alphas.size(); ++i) {
            next[i + 1] = next[i + 1] + P.alphas[i].frob(s);
            next[i] = next[i] - tq1 * P.alphas[i];
        }
        P.alphas = std::move(next);
    }
    return P;
}

// Truncated subresultant matrices of P (q-degree 7, coefficient vector
// alphas[0..7]) and x^(q^5) - d x.  Both determinants vanish exactly when
// the pair has at least q^2 common roots.
inline std::pair<Mat, Mat> subres_matrices(const std::vector<Fe>& alphas,
                                           const Fe& d, uint32_t s) {
    require(alphas.size() == 8, Err::ParamError,
            "subres_matrices expects 8 coefficients");
    const FieldSpec* f = alphas[0].spec();
    require(d.spec() == f, Err::AmbientMismatch, "subres_matrices: mixed fields");
    Mat M1(f, 12, 12), M2(f, 10, 10);
    for (uint32_t i = 0; i <= 4; ++i)
        for (uint32_t j = 0; j <= 7; ++j)
            M1.at(i, i + j) = alphas[7 - j].frob(s * (4 - i));
    for (uint32_t i = 0; i <= 6; ++i) {
        M1.at(5 + i, i) = f->one();
        M1.at(5 + i, i + 5) = -d.frob(s * (6 - i));
    }
    for (uint32_t i = 0; i <= 3; ++i)
        for (uint32_t j = 0; j <= 7 && i + j < 10; ++j)
            M2.at(i, i + j) = alphas[7 - j].frob(s * (3 - i));
    for (uint32_t i = 0; i <= 5; ++i) {
        M2.at(4 + i, i) = f->one();
        if (i <= 4) M2.at(4 + i, i + 5) = -d.frob(s * (5 - i));
    }
    return {M1, M2};
}

// det M2 expanded by multilinearity in the structured rows: a polynomial in
// D_j = d^(q^j).  Key = monomial bitmask (bit j set iff D_j divides the
// term); value = coefficient.  Terms whose expansion picks the d-entry of
// the first structured row vanish (their unit row collides with the fixed
// last row), so only D_1..D_4 can appear: at most 16 monomials.
inline std::map<uint8_t, Fe> symbolic_det_m2(const std::vector<Fe>& alphas,
                                             uint32_t s) {
    require(alphas.size() == 8, Err::ParamError,
            "symbolic_det_m2 expects 8 coefficients");
    const FieldSpec* f = alphas[0].spec();
    std::map<uint8_t, Fe> out;
    for (uint32_t mask = 0; mask < 32; ++mask) {
        Mat M(f, 10, 10);
        for (uint32_t i = 0; i <= 3; ++i)
            for (uint32_t j = 0; j <= 7 && i + j < 10; ++j)
                M.at(i, i + j) = alphas[7 - j].frob(s * (3 - i));
        uint8_t dmask = 0;
        bool odd = false;
        for (uint32_t i = 0; i <= 4; ++i) {
            if ((mask >> i) & 1) {
                M.at(4 + i, i + 5) = f->one();
                dmask |= uint8_t(1u << (5 - i));
                odd = !odd;
            } else {
                M.at(4 + i, i) = f->one();
            }
        }
        M.at(9, 5) = f->one();
        Fe coef = det(M);
        if (odd) coef = -coef;
        if (!coef.is_zero()) out[dmask] = coef;
    }
    return out;
}

// Evaluate a symbolic_det_m2 expansion given D[j] = d^(q^j), j = 0..5.
inline Fe eval_det_m2(const std::map<uint8_t, Fe>& terms,
                      const std::vector<Fe>& D, const FieldSpec* f) {
    Fe acc = f->zero();
    for (const auto& [dmask, coef] : terms) {
        Fe t = coef;
        for (uint32_t j = 0; j < D.size(); ++j)
            if ((dmask >> j) & 1) t = t * D[j];
        acc = acc + t;
    }
    return acc;
}

}  // namespace evasive
