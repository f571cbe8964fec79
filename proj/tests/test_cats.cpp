#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "polyfun/fincat.hpp"

using namespace polyfun;

TEST_CASE("builder hom-set counts match closed forms") {
  FinCat cube3 = build_cube(3);
  CHECK(cube3.mors.size() == 8);

  FinCat fs2 = build_fisharp(2);
  CHECK(fs2.hom[2][2].size() == 7);  // 1 + 4 + 2

  FinCat J2 = build_subset_poset(2, false);
  CHECK(J2.mors.size() == 9);  // 1 + 2 + 2 + 4

  FinCat fs3 = build_fisharp(3);
  CHECK(fs3.hom[3][3].size() == 34);
  FinCat fs4 = build_fisharp(4);
  CHECK(fs4.hom[4][4].size() == 209);

  FinCat fi3 = build_fi(3);
  CHECK(fi3.hom[2][3].size() == 6);  // injections 2 -> 3
  CHECK(fi3.hom[3][2].size() == 0);

  FinCat oi3 = build_oi(3);
  CHECK(oi3.hom[2][3].size() == 3);  // C(3,2)

  FinCat icat3 = build_icat(3);
  CHECK(icat3.hom[2][3].size() == 4);   // subsets of {1,2}
  CHECK(icat3.hom[3][2].size() == 4);

  FinCat gamma3 = build_pointed(3);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      size_t expect = 1;
      for (int i = 0; i < m; ++i) expect *= size_t(n + 1);
      CHECK(gamma3.hom[m][n].size() == expect);
    }
}

TEST_CASE("categories validate exhaustively") {
  std::string err;
  for (const FinCat& C :
       {build_fisharp(3), build_fi(3), build_oi(3), build_icat(3), build_cube(3),
        build_subset_poset(2, false), build_subset_poset(2, true), build_pointed(3),
        build_chain(4)}) {
    INFO(C.name << ": " << err);
    CHECK(validate_category(C, &err));
  }
  std::vector<std::vector<int>> z2 = {{0, 1}, {1, 0}};
  FinCat w = build_fisharp_g(2, z2);
  CHECK(validate_category(w, &err));
  CHECK(w.hom[2][2].size() == 1 + 4 * 2 + 2 * 4);  // empty, partial rank 1 with label, perms with labels
}

TEST_CASE("structural functors z, z', psi_lambda") {
  FinCat cube2 = build_cube(2);
  FinCat J2 = build_subset_poset(2, false);
  FinCat K2 = build_subset_poset(2, true);
  CatFunctor z = z_functor(J2, cube2), zp = zprime_functor(K2, cube2);
  std::string err;
  CHECK(validate_cat_functor(z, &err));
  CHECK(validate_cat_functor(zp, &err));
  // (empty subset of {1,2}) maps to the empty payload
  int f = J2.find_mor(0, 3, {});
  CHECK(cube2.mors[z.mor_map[f]].data[0] == 0);
  // (S subset of S) maps to the identity payload
  int g = J2.find_mor(1, 1, {});
  CHECK(cube2.mors[z.mor_map[g]].data[0] == 3);

  FinCat cube4 = build_cube(4);
  ShiftedPartition lam{{0, 2, 2}};
  CHECK(lam.block(1) == 0b11u);
  CHECK(lam.block(2) == 0b1100u);
  CHECK(lam.expand(0b01u) == 0b0011u);
  CHECK(lam.expand(0b10u) == 0b1100u);
  CatFunctor psi = psi_lambda(lam, cube2, cube4);
  CHECK(!psi.semi);
  CHECK(validate_cat_functor(psi, &err));

  // lambda_0 = 0, all parts 1: identity
  ShiftedPartition triv{{0, 1, 1}};
  CatFunctor id2 = psi_lambda(triv, cube2, cube2);
  for (size_t m = 0; m < cube2.mors.size(); ++m) CHECK(id2.mor_map[m] == int(m));

  // lambda_0 > 0: semigroup homomorphism but not a monoid homomorphism
  FinCat cube3 = build_cube(3);
  ShiftedPartition shifted{{1, 1, 1}};
  CatFunctor sf = psi_lambda(shifted, cube2, cube3);
  CHECK(sf.semi);
  CHECK(validate_cat_functor(sf, &err));  // composition law still holds
  CHECK(sf.mor_map[cube2.ids[0]] != cube3.ids[0]);

  // Property: psi respects intersections for random partitions
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + int(rng() % 3);
    std::vector<int> parts(n + 1);
    int m = 0;
    parts[0] = int(rng() % 2);
    m += parts[0];
    for (int i = 1; i <= n; ++i) {
      parts[i] = 1 + int(rng() % 2);
      m += parts[i];
    }
    ShiftedPartition L{parts};
    for (uint32_t S : subsets_of(n))
      for (uint32_t S2 : subsets_of(n))
        REQUIRE(L.expand(S & S2) == (L.expand(S) & L.expand(S2)));
    (void)m;
  }
}

TEST_CASE("stabiliser structures") {
  FinCat fs = build_fisharp(4);
  Stabiliser st = stabiliser_structure(fs, 1);
  CHECK(st.has_retraction);
  // iota_2: 1 -> 2, 2 -> 3
  CHECK(fs.mors[st.iota[0][2]].data == std::vector<int>{2, 3});
  // s(id_2) = id_3
  CHECK(st.s_mor[0][fs.ids[2]] == fs.ids[3]);

  Stabiliser multi = stabiliser_structure(fs, 3);
  for (int k = 1; k <= 3; ++k)
    for (int n = 0; n + k <= 4; ++n) {
      const Mor& m = fs.mors[multi.iota[k - 1][n]];
      for (int i = 1; i <= n; ++i) REQUIRE(m.data[i - 1] == i + k);
      // iterating the single shift k times gives the same components
      if (n + k <= 4) {
        int it = multi.iota[0][n];
        for (int j = 1; j < k; ++j) it = fs.compose(multi.iota[0][n + j], it);
        REQUIRE(it == multi.iota[k - 1][n]);
      }
    }

  CHECK(!stabiliser_structure(build_fi(4), 1).has_retraction);
  CHECK(!stabiliser_structure(build_oi(4), 1).has_retraction);
  CHECK(stabiliser_structure(build_pointed(4), 1).has_retraction);
  std::vector<std::vector<int>> z2 = {{0, 1}, {1, 0}};
  CHECK(stabiliser_structure(build_fisharp_g(2, z2), 1).has_retraction);
}

TEST_CASE("braidability search") {
  SECTION("fisharp admits a braiding") {
    FinCat fs = build_fisharp(4);
    Stabiliser st = stabiliser_structure(fs, 1);
    auto psi = check_braidable(st);
    REQUIRE(psi.has_value());
    // at n=0 the component swaps the two inserted points
    CHECK(fs.mors[(*psi)[0]].data == std::vector<int>{2, 1});
    // defining equation at every object
    for (size_t t = 0; t < psi->size(); ++t) {
      int n = int(t);
      REQUIRE(fs.compose((*psi)[t], st.s_mor[0][st.iota[0][n]]) == st.iota[0][n + 1]);
    }
  }
  SECTION("chain poset: unique morphisms, identity braiding") {
    FinCat ch = build_chain(4);
    Stabiliser st = stabiliser_structure(ch, 1);
    auto psi = check_braidable(st);
    REQUIRE(psi.has_value());
    for (size_t t = 0; t < psi->size(); ++t) CHECK((*psi)[t] == ch.ids[int(t) + 2]);
  }
  SECTION("monotone injections: no braiding") {
    FinCat oi = build_oi(4);
    Stabiliser st = stabiliser_structure(oi, 1);
    CHECK(!check_braidable(st).has_value());
  }
}

TEST_CASE("conjugator search") {
  FinCat fs = build_fisharp(3);
  SECTION("R={1}, S={3} at n=3") {
    auto phi = find_conjugator(fs, 3, 0b001, 0b100);
    REQUIRE(phi.has_value());
    CHECK(fs.mors[*phi].data[0] == 3);  // phi(1) = 3
    // determinism
    CHECK(find_conjugator(fs, 3, 0b001, 0b100) == phi);
  }
  SECTION("R = S gives the identity") {
    auto phi = find_conjugator(fs, 3, 0b011, 0b011);
    REQUIRE(phi.has_value());
    CHECK(*phi == fs.ids[3]);
  }
  SECTION("subset category has only trivial automorphisms") {
    FinCat icat = build_icat(3);
    CHECK(!find_conjugator(icat, 2, 0b01, 0b10).has_value());
  }
  SECTION("size mismatch is rejected") {
    CHECK_THROWS_AS(find_conjugator(fs, 3, 0b001, 0b011), std::invalid_argument);
  }
  SECTION("Property: fisharp conjugators exist for every equal-size pair") {
    for (int n = 0; n <= 3; ++n)
      for (uint32_t R : subsets_of(n))
        for (uint32_t S : subsets_of(n))
          if (popcount32(R) == popcount32(S))
            REQUIRE(find_conjugator(fs, n, R, S).has_value());
  }
}

TEST_CASE("partial injection factorisation") {
  SECTION("identity gives the empty word") {
    CHECK(factorize_partial_injection({1, 2, 3}, 3, 3).empty());
  }
  SECTION("shift injection recomposes") {
    std::vector<int> iota = {2, 3, 4};
    auto w = factorize_partial_injection(iota, 3, 4);
    CHECK(word_payload(w, 3) == iota);
  }
  SECTION("nowhere defined recomposes") {
    std::vector<int> e = {0, 0};
    auto w = factorize_partial_injection(e, 2, 2);
    CHECK(word_payload(w, 2) == e);
  }
  SECTION("Property: every partial injection recomposes bit-exactly") {
    FinCat fs = build_fisharp(4);
    for (const Mor& m : fs.mors) {
      REQUIRE(word_payload(factorize_partial_injection(m.data, m.src, m.tgt), m.src) ==
              m.data);
    }
  }
}

TEST_CASE("Cat_I axioms") {
  SECTION("fisharp with pi = id passes") {
    FinCat fs = build_fisharp(3);
    CatIReport rep = check_cati_axioms(cati_self(fs, fs));
    INFO((rep.failures.empty() ? std::string() : rep.failures[0]));
    CHECK(rep.ok());
  }
  SECTION("the subset category fails Aut-surjectivity") {
    FinCat icat = build_icat(3);
    FinCat fs = build_fisharp(3);
    CatIStructure st;
    st.C = &icat;
    st.Sigma = &fs;
    st.s_obj = {0, 1, 2, 3};
    st.s_mor = [&icat](int m, int n, uint32_t mask) { return subset_mor(icat, m, n, mask); };
    st.pi = [&](int f) {
      const Mor& m = icat.mors[f];
      return fs.find_mor(m.src, m.tgt, m.data);
    };
    CatIReport rep = check_cati_axioms(st);
    CHECK(!rep.aut_surjective);
  }
  SECTION("wreath product over Z/2 with label-forgetting pi passes") {
    std::vector<std::vector<int>> z2 = {{0, 1}, {1, 0}};
    FinCat w = build_fisharp_g(3, z2);
    FinCat fs = build_fisharp(3);
    CatIReport rep = check_cati_axioms(cati_self(w, fs));
    INFO((rep.failures.empty() ? std::string() : rep.failures[0]));
    CHECK(rep.ok());
  }
}
