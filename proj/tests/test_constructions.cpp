#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "evasive/constructions.hpp"
#include "evasive/evasive.hpp"

using namespace evasive;

TEST_CASE("gabidulin kernels are maximum (r-1,r-1)-evasive", "[constructions]") {
    FqSubspace G32 = gabidulin(2, 3, 2);
    REQUIRE(G32.dim() == 3);
    REQUIRE(fqn_span_dim(G32) == 2);
    REQUIRE(profile(G32, 1).k_star == 1);

    FqSubspace G53 = gabidulin(2, 5, 3);
    REQUIRE(G53.dim() == 5);
    REQUIRE(fqn_span_dim(G53) == 3);
    REQUIRE(profile(G53, 2).k_star == 2);

    FqSubspace G22 = gabidulin(2, 2, 2);
    REQUIRE(G22.dim() == 2);
    REQUIRE(profile(G22, 1).k_star == 1);

    REQUIRE_THROWS_AS(gabidulin(2, 2, 3), Error);
    REQUIRE_THROWS_AS(gabidulin(6, 3, 2), Error);  // q not a prime power
}

TEST_CASE("subgeometries are (h, mh)-evasive", "[constructions]") {
    FqSubspace S = subgeometry(2, 3, 3, 1);
    REQUIRE(S.dim() == 3);
    REQUIRE(profile(S, 2).k_star == 2);
    REQUIRE(profile(S, 1).k_star == 1);

    FqSubspace W = subgeometry(2, 2, 2, 2);  // m = n: the whole space
    REQUIRE(W.dim() == 4);
    REQUIRE(W == whole_space(AmbientSpace::get(2, 1, 2, 2)));

    FqSubspace S2 = subgeometry(2, 4, 2, 2);
    REQUIRE(S2.dim() == 4);
    REQUIRE(profile(S2, 1).k_star == 2);

    REQUIRE_THROWS_AS(subgeometry(2, 4, 2, 3), Error);  // m does not divide n
}

TEST_CASE("guruswami common kernels: dimension, spanning, multi-level evasiveness",
          "[constructions]") {
    FqSubspace U = guruswami(2, 3, 3, 1);
    REQUIRE(U.dim() == 6);
    REQUIRE(fqn_span_dim(U) == 3);
    REQUIRE(profile(U, 1).k_star <= 2);

    // r=2, h=1 carries the same parameters as the Gabidulin kernel
    FqSubspace U2 = guruswami(2, 3, 2, 1);
    REQUIRE(U2.dim() == 3);
    REQUIRE(profile(U2, 1).k_star == profile(gabidulin(2, 3, 2), 1).k_star);

    {
        AmbPtr amb = AmbientSpace::get(2, 1, 4, 3);
        Fe xi = amb->Kn->gen();
        std::vector<Fe> gammas{amb->Kn->one(), xi, xi.pow(2)};
        FqSubspace U3 = guruswami(2, 4, 3, 2, gammas);
        REQUIRE(U3.dim() == 4);
        // (k, (r-1)k)-evasive for all k <= h
        REQUIRE(profile(U3, 1).k_star <= 2);
        REQUIRE(profile(U3, 2).k_star <= 4);
    }

    REQUIRE_THROWS_AS(guruswami(2, 3, 3, 3), Error);   // h >= r
    REQUIRE_THROWS_AS(guruswami(2, 2, 3, 1), Error);   // n < r
    {
        AmbPtr amb = AmbientSpace::get(2, 1, 3, 3);
        std::vector<Fe> bad{amb->Kn->one(), amb->Kn->one(), amb->Kn->gen()};
        REQUIRE_THROWS_AS(guruswami(2, 3, 3, 1, bad), Error);  // repeated gamma
    }
}

TEST_CASE("direct sums concatenate blocks and obey the sum theorems", "[constructions]") {
    FqSubspace G = gabidulin(2, 3, 2);
    FqSubspace D = direct_sum(G, G);
    REQUIRE(D.dim() == 6);
    REQUIRE(D.amb()->r == 4);
    REQUIRE(profile(D, 1).k_star == 1);  // Thm directsumpoints with k1 = k2 = 1

    // (1,2)- and (1,3)-evasive summands give a (1,3)-evasive sum
    FqSubspace U1 = extend_random(G, 1, 41);   // (1,2)-evasive of dim 4
    FqSubspace U2 = extend_random(G, 2, 43);   // (1,3)-evasive of dim 5
    REQUIRE(profile(U1, 1).k_star <= 2);
    REQUIRE(profile(U2, 1).k_star <= 3);
    FqSubspace S = direct_sum(U1, U2);
    REQUIRE(S.dim() == 9);
    REQUIRE(profile(S, 1).k_star <= 3);

    // zero summand changes the ambient, not the h=1 profile
    FqSubspace Z = zero_subspace(AmbientSpace::get(2, 1, 3, 1));
    FqSubspace ZG = direct_sum(Z, G);
    REQUIRE(ZG.dim() == G.dim());
    REQUIRE(ZG.amb()->r == 3);
    REQUIRE(profile(ZG, 1).k_star == profile(G, 1).k_star);

    REQUIRE_THROWS_AS(direct_sum(G, gabidulin(2, 4, 2)), Error);
    REQUIRE_THROWS_AS(direct_sum(G, gabidulin(3, 3, 2)), Error);
}

TEST_CASE("random extensions grow dimension and defect together", "[constructions]") {
    FqSubspace G = gabidulin(2, 3, 2);
    REQUIRE(extend_random(G, 0, 7) == G);
    FqSubspace E1 = extend_random(G, 1, 1234);
    REQUIRE(E1.dim() == 4);
    REQUIRE(profile(E1, 1).k_star <= 2);
    REQUIRE(extend_random(G, 1, 1234) == E1);  // deterministic in the seed
    FqSubspace All = extend_random(G, uint32_t(G.amb()->flat_dim - G.dim()), 9);
    REQUIRE(All == whole_space(G.amb()));
    REQUIRE_THROWS_AS(extend_random(G, 10, 1), Error);
}

TEST_CASE("hyperplane lifts add a coordinate and a controlled defect", "[constructions]") {
    // scattered dim n in V(2,q^n) -> (2,n)-evasive dim 2n-1 in V(3,q^n)
    FqSubspace G = gabidulin(2, 3, 2);
    FqSubspace L = hyperplane_lift(G, 2, 1);
    REQUIRE(L.dim() == 5);
    REQUIRE(L.amb()->r == 3);
    REQUIRE(profile(L, 2).k_star <= 3);

    // q=2, n=4 chain to a (2,4)-evasive of dimension 7 in V(3,2^4)
    FqSubspace G4 = gabidulin(2, 4, 2);
    FqSubspace L4 = hyperplane_lift(G4, 3, 1);
    REQUIRE(L4.dim() == 7);
    REQUIRE(profile(L4, 2).k_star <= 4);

    REQUIRE_THROWS_AS(hyperplane_lift(G, 4), Error);       // s > n
    REQUIRE_THROWS_AS(hyperplane_lift(L, 1, 2), Error);    // s < dim W - k
}

TEST_CASE("b1 recipe: maximum (r-1,k)-evasive of dimension n+k-r+1", "[constructions]") {
    FqSubspace U = b1(2, 5, 3, 3);
    REQUIRE(U.dim() == 6);
    REQUIRE(profile(U, 2).k_star <= 3);

    REQUIRE(b1(2, 5, 3, 2) == gabidulin(2, 5, 3));  // k = r-1: no extra piece

    FqSubspace U2 = b1(2, 4, 2, 2);
    REQUIRE(U2.dim() == 5);
    REQUIRE(profile(U2, 1).k_star <= 2);

    REQUIRE_THROWS_AS(b1(2, 4, 3, 4), Error);  // (k-r+2)(r-1) >= n
    REQUIRE_THROWS_AS(b1(2, 5, 3, 1), Error);  // k < r-1
}

TEST_CASE("ex00 recipe: (r-1,k)-evasive of dimension n+k-1", "[constructions]") {
    FqSubspace U = ex00(2, 3, 3, 3);
    REQUIRE(U.dim() == 5);
    REQUIRE(fqn_span_dim(U) >= 2);
    REQUIRE(profile(U, 2).k_star <= 3);

    REQUIRE(ex00(2, 3, 2, 3) == whole_space(AmbientSpace::get(2, 1, 3, 2)));  // r=2, k=n
    REQUIRE(ex00(2, 4, 2, 2) == b1(2, 4, 2, 2));                              // r=2, k<n

    REQUIRE_THROWS_AS(ex00(2, 3, 3, 2), Error);  // k below (r-2)(n-1)+1
    REQUIRE_THROWS_AS(ex00(2, 3, 2, 7), Error);  // k above (r-1)n
}

TEST_CASE("downward closure of evasiveness on constructed instances", "[constructions]") {
    // (h,k)-evasive implies (h-s,k-s)-evasive
    FqSubspace S2 = subgeometry(2, 4, 2, 2);  // (1,2): descend from (h,k)=(1,2)? use h=1 only
    REQUIRE(profile(S2, 1).k_star == 2);

    FqSubspace U = b1(2, 5, 3, 3);  // (2,3)-evasive
    size_t k2 = profile(U, 2).k_star;
    size_t k1 = profile(U, 1).k_star;
    REQUIRE(k2 <= 3);
    REQUIRE(k1 <= k2 - 1);

    FqSubspace G = guruswami(2, 3, 3, 1);
    REQUIRE(profile(G, 1).k_star <= 2);  // descent from claimed (1,2) holds trivially
}
