#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "evasive/field.hpp"
#include "evasive/poly.hpp"
#include "evasive/qpoly.hpp"
#include "evasive/rng.hpp"
#include "evasive/subfield.hpp"

using namespace evasive;

namespace {

// The reference instance over F_(2^15): lambda = xi^31369 satisfies
// lambda^15 + lambda + 1 = 0 and the pair (lambda^2, lambda^4) yields a
// kernel polynomial with known coefficients.
struct Instance21 {
    SpecPtr f;
    Fe xi, lambda;
    KernelPoly kp;

    Instance21()
        : f(FieldSpec::preset15(2)),
          xi(f->gen()),
          lambda(xi.pow(31369)),
          kp(build_P(lambda.pow(2), lambda.pow(4), lambda)) {}
};

}  // namespace

TEST_CASE("build_R kernel is the F_(q^3)-span of the pair", "[qpoly]") {
    Instance21 I;
    Fe a = I.lambda.pow(2), b = I.lambda.pow(4);
    QPoly R = build_R(a, b);
    REQUIRE(R.qdeg() == 6);
    REQUIRE(R.eval(a).is_zero());
    REQUIRE(R.eval(b).is_zero());

    SpecPtr f8 = FieldSpec::get(2, 3);
    const SubfieldMap& m8 = subfield_map(f8, I.f);
    for (uint64_t u = 0; u < 8; ++u)
        for (uint64_t v = 0; v < 8; ++v) {
            Fe x = m8.embed(f8->from_code(u)) * a + m8.embed(f8->from_code(v)) * b;
            REQUIRE(R.eval(x).is_zero());
        }
    REQUIRE(flat_kernel(qpoly_fp_matrix(R)).rows == 6);
}

TEST_CASE("build_P reproduces the reference coefficients", "[qpoly]") {
    Instance21 I;
    const auto& P = I.kp.P;

    REQUIRE((I.lambda.pow(15) + I.lambda + I.f->one()).is_zero());
    REQUIRE(I.kp.c == I.xi.pow(8539));
    REQUIRE(P.qdeg() == 7);
    REQUIRE(P.alphas[2].is_zero());
    REQUIRE(P.alphas[5].is_zero());
    REQUIRE(P.alphas[0] == I.xi.pow(1184));
    REQUIRE(P.alphas[1] == I.xi.pow(9518));
    REQUIRE(P.alphas[3] == I.xi.pow(31241));
    REQUIRE(P.alphas[4] == I.xi.pow(4098));
    REQUIRE(P.alphas[6] == I.xi.pow(23283));
    REQUIRE(P.alphas[7] == I.xi.pow(20949));

    // ker P contains <a, b>_(F_8) + <lambda>_(F_2) and has F_2-dimension 7
    REQUIRE(P.eval(I.lambda).is_zero());
    Fe a = I.lambda.pow(2), b = I.lambda.pow(4);
    SpecPtr f8 = FieldSpec::get(2, 3);
    const SubfieldMap& m8 = subfield_map(f8, I.f);
    for (uint64_t u = 0; u < 8; ++u)
        for (uint64_t v = 0; v < 8; ++v)
            for (uint64_t e = 0; e < 2; ++e) {
                Fe x = m8.embed(f8->from_code(u)) * a + m8.embed(f8->from_code(v)) * b;
                if (e) x = x + I.lambda;
                REQUIRE(P.eval(x).is_zero());
            }
    auto basis = qpoly_kernel_basis(P);
    REQUIRE(basis.size() == 7);
    for (const Fe& x : basis) REQUIRE(P.eval(x).is_zero());
}

TEST_CASE("subresultant matrices carry the displayed entries", "[qpoly]") {
    Instance21 I;
    Fe d = I.xi.pow(31);  // an admissible direction
    auto [M1, M2] = subres_matrices(I.kp.P.alphas, d, 1);

    auto e = [&](uint64_t k) { return I.xi.pow(k); };
    const uint64_t rows[4][8] = {
        {3757, 22429, 0, 17, 20559, 0, 10610, 9472},
        {18262, 27598, 0, 16392, 26663, 0, 5305, 4736},
        {9131, 13799, 0, 8196, 29715, 0, 19036, 2368},
        {20949, 23283, 0, 4098, 31241, 0, 9518, 0},
    };
    for (uint32_t i = 0; i < 4; ++i)
        for (uint32_t j = 0; j < 8 && i + j < 10; ++j) {
            if (j == 2 || j == 5)
                REQUIRE(M2.at(i, i + j).is_zero());
            else
                REQUIRE(M2.at(i, i + j) == e(rows[i][j]));
        }
    for (uint32_t i = 0; i <= 5; ++i) {
        REQUIRE(M2.at(4 + i, i).is_one());
        if (i <= 4) REQUIRE(M2.at(4 + i, i + 5) == -d.frob(5 - i));
    }
    REQUIRE(M2.at(9, 0).is_zero());

    REQUIRE(M1.at(0, 0) == I.kp.P.alphas[7].frob(4));
    REQUIRE(M1.at(4, 4) == I.kp.P.alphas[7]);
    REQUIRE(M1.at(4, 11) == I.kp.P.alphas[0]);
    for (uint32_t i = 0; i <= 6; ++i) {
        REQUIRE(M1.at(5 + i, i).is_one());
        REQUIRE(M1.at(5 + i, i + 5) == -d.frob(6 - i));
    }
}

TEST_CASE("symbolic det M2 matches the displayed expansion", "[qpoly]") {
    Instance21 I;
    auto terms = symbolic_det_m2(I.kp.P.alphas, 1);
    REQUIRE(terms.size() == 8);
    auto coef = [&](uint8_t mask) {
        auto it = terms.find(mask);
        REQUIRE(it != terms.end());
        return it->second;
    };
    auto e = [&](uint64_t k) { return I.xi.pow(k); };
    // masks: bit j set iff d^(q^j) divides the monomial
    REQUIRE(coef(0b11110) == e(5977));   // D4 D3 D2 D1
    REQUIRE(coef(0b01110) == e(2592));   // D3 D2 D1
    REQUIRE(coef(0b00110) == e(4799));   // D2 D1
    REQUIRE(coef(0b00010) == e(8832));   // D1
    REQUIRE(coef(0b11100) == e(4161));   // D4 D3 D2
    REQUIRE(coef(0b10100) == e(19121));  // D4 D2
    REQUIRE(coef(0b10000) == e(28007));  // D4
    REQUIRE(coef(0b00000) == e(27801));  // constant term
}

TEST_CASE("formula equals the generic determinant on admissible d", "[qpoly]") {
    Instance21 I;
    auto terms = symbolic_det_m2(I.kp.P.alphas, 1);
    Rng rng(2026);
    for (int trial = 0; trial < 100; ++trial) {
        uint64_t j = rng.below(1057);
        Fe d = I.xi.pow(31 * j);
        REQUIRE(d.pow(1057).is_one());
        std::vector<Fe> D;
        for (uint32_t k = 0; k < 6; ++k) D.push_back(d.frob(k));
        Fe direct = det(subres_matrices(I.kp.P.alphas, d, 1).second);
        REQUIRE(eval_det_m2(terms, D, I.f.get()) == direct);
    }
}

TEST_CASE("formula equals the generic determinant for arbitrary coefficients",
          "[qpoly]") {
    SpecPtr f = FieldSpec::get(2, 15);
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Fe> alphas;
        for (int i = 0; i < 8; ++i) alphas.push_back(f->from_code(rng.below(f->order)));
        if (alphas[7].is_zero()) alphas[7] = f->one();
        Fe d = f->from_code(1 + rng.below(f->order - 1));
        auto terms = symbolic_det_m2(alphas, 1);
        std::vector<Fe> D;
        for (uint32_t k = 0; k < 6; ++k) D.push_back(d.frob(k));
        REQUIRE(eval_det_m2(terms, D, f.get()) ==
                det(subres_matrices(alphas, d, 1).second));
    }
}

TEST_CASE("the residual cubic has the known roots, none admissible", "[qpoly]") {
    Instance21 I;
    auto e = [&](uint64_t k) { return I.xi.pow(k); };
    FPoly G = FPoly::from(I.f.get(),
                          {e(31682), e(24175), e(7925), I.f->one()});
    auto roots = find_roots(G);
    REQUIRE(roots.size() == 3);
    std::vector<Fe> want = {e(15773), e(16482), e(32194)};
    std::sort(want.begin(), want.end(),
              [](const Fe& x, const Fe& y) { return x.code() < y.code(); });
    for (size_t i = 0; i < 3; ++i) REQUIRE(roots[i] == want[i]);
    for (const Fe& r : roots) REQUIRE(!r.pow(1057).is_one());
}

TEST_CASE("qpoly_of_subspace interpolates a given kernel", "[qpoly]") {
    SpecPtr f = FieldSpec::get(2, 6);
    Fe x = f->gen();
    std::vector<Fe> basis = {x, x.pow(3) + f->one(), x.pow(5)};
    QPoly P = qpoly_of_subspace(f.get(), 1, basis);
    REQUIRE(P.qdeg() == 3);
    for (uint64_t m = 0; m < 8; ++m) {
        Fe v = f->zero();
        for (int k = 0; k < 3; ++k)
            if ((m >> k) & 1) v = v + basis[k];
        REQUIRE(P.eval(v).is_zero());
    }
    REQUIRE(flat_kernel(qpoly_fp_matrix(P)).rows == 3);

    // q = 4: one F_4-basis vector spans an F_2-dimension-2 kernel
    QPoly P4 = qpoly_of_subspace(f.get(), 2, {x});
    REQUIRE(P4.qdeg() == 1);
    REQUIRE(P4.eval(x).is_zero());
    REQUIRE(flat_kernel(qpoly_fp_matrix(P4)).rows == 2);
    auto b4 = qpoly_kernel_basis(P4);
    REQUIRE(b4.size() == 1);

    REQUIRE_THROWS_AS(qpoly_of_subspace(f.get(), 1, {x, x}), Error);
}

TEST_CASE("pair construction guards", "[qpoly]") {
    Instance21 I;
    Fe a = I.lambda.pow(2);
    SpecPtr f8 = FieldSpec::get(2, 3);
    Fe mu = subfield_map(f8, I.f).embed(f8->gen());

    try {
        build_R(a, a * mu);
        FAIL("expected DependentPair");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::DependentPair);
    }
    try {
        build_P(a, I.lambda.pow(4), a);
        FAIL("expected XbarInKernel");
    } catch (const Error& err) {
        REQUIRE(err.code() == Err::XbarInKernel);
    }
}
