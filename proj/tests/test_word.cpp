#include <doctest.h>

#include "greenwalk/amalgam.hpp"
#include "test_helpers.hpp"

using namespace greenwalk;
using namespace greenwalk::testing;

TEST_CASE("syllable algebra closed forms") {
  TestRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    AffineSyllable a = random_affine_not_elementary(rng);
    AffineSyllable ai = affine_inverse(a);
    CHECK(affine_mul(a, ai).is_identity());
    CHECK(affine_mul(ai, a).is_identity());

    ElementarySyllable e = random_elementary_not_affine(rng);
    ElementarySyllable ei = elementary_inverse(e);
    CHECK(elementary_mul(e, ei).is_identity());
    CHECK(elementary_mul(ei, e).is_identity());

    ElementarySyllable e2 = random_elementary_not_affine(rng);
    PlaneAutomorphism lhs = syllable_automorphism(Syllable(elementary_mul(e, e2)));
    PlaneAutomorphism rhs = compose(syllable_automorphism(Syllable(e)),
                                    syllable_automorphism(Syllable(e2)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("membership in the intersection subgroup") {
  AffineSyllable tri = make_affine(gq(2), gq(3), gq(0), gq(1), gq(1), gq(0));
  CHECK(tri.in_elementary());
  ElementarySyllable conv = affine_to_elementary(tri);
  PlaneAutomorphism a1 = syllable_automorphism(Syllable(tri));
  PlaneAutomorphism a2 = syllable_automorphism(Syllable(conv));
  CHECK(a1 == a2);

  ElementarySyllable lin = make_elementary(gq(2), UniPoly::monomial(1, gq(5)), gq(3), gq(1));
  CHECK(lin.in_affine());
  CHECK(syllable_automorphism(Syllable(elementary_to_affine(lin))) ==
        syllable_automorphism(Syllable(lin)));

  CHECK(!swap_xy().in_elementary());
  CHECK(!henon_elementary(y_squared(), gq(1)).in_affine());
}

TEST_CASE("reduce cancels inverse pairs") {
  TestRng rng(5);
  AffineSyllable a = random_affine_not_elementary(rng);
  AmalgamWord w = AmalgamWord::from_syllables({Syllable(a), Syllable(affine_inverse(a))});
  CHECK(reduce_word(w).empty());
}

TEST_CASE("reduce absorbs intersection factors between elementary syllables") {
  TestRng rng(9);
  ElementarySyllable e1 = random_elementary_not_affine(rng);
  ElementarySyllable e2 = random_elementary_not_affine(rng);
  AffineSyllable s = make_affine(gq(1), gq(2), gq(0), gq(3), gq(0), gq(1));  // in S
  AmalgamWord w = AmalgamWord::from_syllables({Syllable(e1), Syllable(s), Syllable(e2)});
  AmalgamWord r = reduce_word(w);
  CHECK(r.size() == 1);
  CHECK(compose_word(r) == compose_word(w));
}

TEST_CASE("reduce is idempotent on reduced words") {
  TestRng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 4, 30);
    AmalgamWord r = reduce_word(w);
    CHECK(r.size() == w.size());
    for (size_t i = 0; i < r.size(); ++i) {
      CHECK(syllable_equal(r.syllable(i), w.syllable(i)));
    }
  }
}

TEST_CASE("compose_word basics") {
  CHECK(compose_word(AmalgamWord()).is_identity());
  CHECK(compose_word(henon_word()) == henon_quadratic());
}

TEST_CASE("reduced words alternate and avoid the intersection") {
  TestRng rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 4, 40);
    if (w.size() <= 1) continue;
    for (size_t i = 0; i < w.size(); ++i) {
      CHECK(!syllable_in_s(w.syllable(i)));
      if (i + 1 < w.size()) {
        CHECK(syllable_is_affine(w.syllable(i)) != syllable_is_affine(w.syllable(i + 1)));
      }
    }
  }
}

TEST_CASE("degree of a reduced word is the product of elementary degrees") {
  TestRng rng(19);
  for (int trial = 0; trial < 15; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 3, 24);
    long expect = 1;
    for (size_t i = 0; i < w.size(); ++i) {
      if (!syllable_is_affine(w.syllable(i))) expect *= syllable_degree(w.syllable(i));
    }
    CHECK(compose_word(w).degree() == expect);
  }
}

TEST_CASE("invert_word composes to the identity") {
  TestRng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 3, 12);
    CHECK(word_mul(invert_word(w), w).empty());
    CHECK(word_mul(w, invert_word(w)).empty());
  }
  for (int trial = 0; trial < 5; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 2, 4, 2);
    PlaneAutomorphism prod = compose(compose_word(invert_word(w)), compose_word(w));
    CHECK(prod.is_identity());
  }
  // Hénon word inverts to [e^{-1}, a^{-1}]
  AmalgamWord inv = invert_word(henon_word());
  CHECK(inv.size() == 2);
  CHECK(!syllable_is_affine(inv.syllable(0)));
  CHECK(syllable_is_affine(inv.syllable(1)));
}

TEST_CASE("tree distance examples and metric axioms") {
  AmalgamWord h = henon_word();
  CHECK(tree_distance(h, h) == 0);
  CHECK(tree_distance(AmalgamWord(), h) == 2);
  AmalgamWord h2 = word_mul(h, h);
  CHECK(h2.size() == 4);
  CHECK(tree_distance(h, h2) == 2);

  TestRng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    AmalgamWord g1 = random_reduced_word(rng, 3, 12);
    AmalgamWord g2 = random_reduced_word(rng, 3, 12);
    AmalgamWord g3 = random_reduced_word(rng, 3, 12);
    long d12 = tree_distance(g1, g2);
    long d21 = tree_distance(g2, g1);
    CHECK(d12 == d21);
    CHECK(d12 <= tree_distance(g1, g3) + tree_distance(g3, g2));
    CHECK(tree_distance(g1, g1) == 0);
  }
}

TEST_CASE("classification of the Hénon word") {
  WordClass c = cyclic_reduce_classify(henon_word());
  CHECK(c.kind == WordClass::Loxodromic);
  CHECK(c.dynamical_degree == 2);
  CHECK(c.translation_length == 2);
}

TEST_CASE("single elementary syllable is elliptic") {
  AmalgamWord w = reduce_word(
      AmalgamWord::from_syllables({Syllable(henon_elementary(y_squared(), gq(1)))}));
  WordClass c = cyclic_reduce_classify(w);
  CHECK(c.kind == WordClass::Elliptic);
  CHECK(c.dynamical_degree == 1);
  CHECK(c.translation_length == 0);
}

TEST_CASE("classification is a conjugation invariant") {
  TestRng rng(41);
  AmalgamWord h = henon_word();
  for (int trial = 0; trial < 8; ++trial) {
    AmalgamWord g = random_reduced_word(rng, 2, 6);
    AmalgamWord conj = word_mul(word_mul(g, h), invert_word(g));
    WordClass c = cyclic_reduce_classify(conj);
    CHECK(c.kind == WordClass::Loxodromic);
    CHECK(c.dynamical_degree == 2);
    CHECK(c.translation_length == 2);
    // conjugator transports the word onto its cyclic reduction
    PlaneAutomorphism lhs = compose_word(word_mul(
        word_mul(invert_word(c.conjugator), conj), c.conjugator));
    CHECK(lhs == compose_word(c.cyclic_word));
  }
}

TEST_CASE("classification demands a reduced word") {
  AmalgamWord raw = AmalgamWord::from_syllables({Syllable(swap_xy()), Syllable(swap_xy())});
  CHECK_THROWS_AS(cyclic_reduce_classify(raw), error);
}

TEST_CASE("powers of a cyclically reduced word have exact degree powers") {
  TestRng rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 2, 4);
    WordClass c = cyclic_reduce_classify(w);
    if (c.kind != WordClass::Loxodromic) continue;
    AmalgamWord cyc = c.cyclic_word;
    AmalgamWord pw = cyc;
    long long lambda = c.dynamical_degree;
    long long expect = lambda;
    for (int n = 2; n <= 4; ++n) {
      pw = word_mul(pw, cyc);
      expect *= lambda;
      if (expect > 100) break;
      CHECK(compose_word(pw).degree() == expect);
    }
  }
}
