#include <doctest.h>

#include "greenwalk/amalgam.hpp"
#include "test_helpers.hpp"

using namespace greenwalk;
using namespace greenwalk::testing;

TEST_CASE("affine maps decompose to a single affine syllable") {
  TestRng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    AffineSyllable a = random_affine_not_elementary(rng);
    PlaneAutomorphism f = syllable_automorphism(Syllable(a));
    AmalgamWord w = jung_decompose(f);
    CHECK(w.size() == 1);
    CHECK(compose_word(w) == f);
  }
}

TEST_CASE("quadratic example decomposes as swap then elementary") {
  AmalgamWord w = jung_decompose(henon_quadratic());
  REQUIRE(w.size() == 2);
  CHECK(syllable_is_affine(w.syllable(0)));
  CHECK(!syllable_is_affine(w.syllable(1)));
  CHECK(compose_word(w) == henon_quadratic());
  CHECK(syllable_degree(w.syllable(1)) == 2);
}

TEST_CASE("degree-4 composite splits into two quadratic elementary syllables") {
  PlaneAutomorphism hh = compose(henon_quadratic(), henon_quadratic());
  AmalgamWord w = jung_decompose(hh);
  CHECK(compose_word(w) == hh);
  int elementary_count = 0;
  long product = 1;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!syllable_is_affine(w.syllable(i))) {
      ++elementary_count;
      product *= syllable_degree(w.syllable(i));
    }
  }
  CHECK(elementary_count == 2);
  CHECK(product == 4);
}

TEST_CASE("round trip on random reduced words") {
  TestRng rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 3, 16);
    PlaneAutomorphism f = compose_word(w);
    AmalgamWord back = jung_decompose(f);
    CHECK(compose_word(back) == f);
  }
}

TEST_CASE("rejects pairs with non-constant jacobian before decomposition") {
  PlanePolynomial f1 = PlanePolynomial::variable_x();
  PlanePolynomial f2;
  f2.add_term(1, 1, gq(1));  // (x, xy)
  CHECK_THROWS_AS(PlaneAutomorphism::make(f1, f2), error);
}

TEST_CASE("decomposition respects the coefficient budget") {
  Budget tiny;
  tiny.max_coeff_bits = 8;
  TestRng rng(57);
  // Large translations force big coefficients in the peeled powers.
  UniPoly p;
  p.add_term(2, gq(1));
  p.add_term(0, gq(1000000007L));
  PlaneAutomorphism f = henon_map(p, gq(1));
  PlaneAutomorphism f3 = compose(compose(f, f), f);
  CHECK_THROWS_AS(jung_decompose(f3, tiny), error);
}
