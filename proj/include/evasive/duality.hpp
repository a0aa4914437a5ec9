#pragma once

// The two dualities of the theory: the ordinary dual under the bilinear form
// Tr_{q^n/q}(sum u_i v_i), and the Delsarte dual via the parity-check matrix
// of the associated q-system.

#include <unordered_map>
#include <vector>

#include "evasive/ambient.hpp"
#include "evasive/linalg.hpp"

namespace evasive {

namespace detail {

// n x n Gram block T[a][b] = code of Tr_{q^n/q}(mu_a mu_b) for the flat basis
inline FlatMat trace_gram_block(const AmbPtr& amb) {
    std::unordered_map<uint64_t, uint8_t> code_of;
    for (uint64_t c = 0; c < amb->q; ++c) code_of[amb->fq_embed(uint8_t(c)).code()] = uint8_t(c);
    std::vector<Fe> mu;
    std::vector<uint8_t> unit(amb->n);
    for (uint32_t a = 0; a < amb->n; ++a) {
        std::fill(unit.begin(), unit.end(), 0);
        unit[a] = 1;
        mu.push_back(amb->unflatten_elem(unit.data()));
    }
    FlatMat T(amb->Fq, amb->n, amb->n);
    for (uint32_t a = 0; a < amb->n; ++a)
        for (uint32_t b = a; b < amb->n; ++b) {
            Fe tr = rel_trace(mu[a] * mu[b], amb->q, amb->n);
            auto it = code_of.find(tr.code());
            require(it != code_of.end(), Err::ParamError, "trace left the base field");
            T.at(a, b) = it->second;
            T.at(b, a) = it->second;
        }
    require(flat_rank(T) == amb->n, Err::ParamError, "degenerate trace form");
    return T;
}

}  // namespace detail

// orthogonal complement of U under (u,v) -> Tr_{q^n/q}(sum_i u_i v_i)
inline FqSubspace ordinary_dual(const FqSubspace& U) {
    const AmbPtr& amb = U.amb();
    FlatMat T = detail::trace_gram_block(amb);
    // Gram = r diagonal copies of T; M = U_flat * Gram
    FlatMat M(amb->Fq, U.dim(), amb->flat_dim);
    const SmallField& F = *amb->Fq;
    for (size_t row = 0; row < U.dim(); ++row) {
        const uint8_t* u = U.flat().row_ptr(row);
        for (uint32_t i = 0; i < amb->r; ++i)
            for (uint32_t b = 0; b < amb->n; ++b) {
                uint8_t acc = 0;
                for (uint32_t a = 0; a < amb->n; ++a) {
                    uint8_t ua = u[size_t(i) * amb->n + a];
                    if (ua) acc = F.add(acc, F.mul(ua, T.at(a, b)));
                }
                M.at(row, size_t(i) * amb->n + b) = acc;
            }
    }
    return FqSubspace(amb, flat_kernel(M));
}

// F_{q^n}-orthogonal complement of R under sigma(u,v) = sum_i u_i v_i
inline FqnSubspace kn_orthogonal(const FqnSubspace& R) {
    const AmbPtr& amb = R.amb();
    Mat K = kernel_basis(R.basis());
    return FqnSubspace(amb, kn_rref_canonical(std::move(K)));
}

// both sides of the duality dimension identity
// dim_q(dual(U) ∩ perp(R)) − dim_q(U ∩ R) and rn − t − sn
inline std::pair<int64_t, int64_t> duality_identity_check(const FqSubspace& U,
                                                          const FqnSubspace& R) {
    const AmbPtr& amb = U.amb();
    require(amb.get() == R.amb().get(), Err::AmbientMismatch, "mixed ambients");
    FqSubspace Ud = ordinary_dual(U);
    FqnSubspace Rp = kn_orthogonal(R);
    size_t en_U = R.dim() * amb->n;
    size_t en_Ud = Rp.dim() * amb->n;
    // dim_q(X ∩ expand(Y)) computed by rank gain
    auto idim = [&](const FqSubspace& X, const FqnSubspace& Y, size_t en) {
        Eliminator elim;
        elim.set_base(X.flat());
        std::vector<uint8_t> scratch(en * amb->flat_dim);
        std::vector<Fe> tmp;
        expand_rows_into(amb, Y.basis(), scratch.data(), tmp);
        size_t newp = 0;
        for (size_t i = 0; i < en; ++i)
            if (elim.add_row(scratch.data() + i * amb->flat_dim)) ++newp;
        return en - newp;
    };
    int64_t lhs = int64_t(idim(Ud, Rp, en_Ud)) - int64_t(idim(U, R, en_U));
    int64_t rhs = int64_t(amb->flat_dim) - int64_t(U.dim()) - int64_t(R.dim() * amb->n);
    return {lhs, rhs};
}

// Delsarte dual from an explicit ordered F_q-basis of U (the result as a
// subspace does not depend on the choice; the canonical entry point below
// uses the RREF basis)
inline FqSubspace delsarte_dual_from_basis(const AmbPtr& amb,
                                           const std::vector<std::vector<Fe>>& basis) {
    const size_t t = basis.size();
    require(t > amb->r, Err::ParamError, "delsarte_dual needs dim U > r");
    Mat G(amb->Kn.get(), amb->r, t);
    for (size_t c = 0; c < t; ++c) {
        require(basis[c].size() == amb->r, Err::AmbientMismatch, "basis arity");
        for (uint32_t i = 0; i < amb->r; ++i) G.at(i, c) = basis[c][i];
    }
    require(rank(G) == amb->r, Err::NotSpanning, "delsarte_dual: U must span V over GF(q^n)");
    Mat H = kn_rref_canonical(kernel_basis(G));
    require(H.rows() == t - amb->r, Err::ParamError, "parity-check rank");
    // re-verify H * G^T = 0
    for (size_t i = 0; i < H.rows(); ++i)
        for (uint32_t j = 0; j < amb->r; ++j) {
            Fe acc = amb->Kn->zero();
            for (size_t k = 0; k < t; ++k) acc = acc + H.at(i, k) * G.at(j, k);
            require(acc.is_zero(), Err::ParamError, "parity-check identity failed");
        }
    AmbPtr out_amb = AmbientSpace::get(amb->p, amb->s, amb->n, uint32_t(t - amb->r));
    std::vector<std::vector<Fe>> cols;
    cols.reserve(t);
    for (size_t c = 0; c < t; ++c) {
        std::vector<Fe> v;
        v.reserve(H.rows());
        for (size_t i = 0; i < H.rows(); ++i) v.push_back(H.at(i, c));
        cols.push_back(std::move(v));
    }
    return fq_span(out_amb, cols);
}

inline FqSubspace delsarte_dual(const FqSubspace& U) {
    std::vector<std::vector<Fe>> basis;
    basis.reserve(U.dim());
    for (size_t i = 0; i < U.dim(); ++i) basis.push_back(U.basis_vector(i));
    return delsarte_dual_from_basis(U.amb(), basis);
}

}  // namespace evasive
