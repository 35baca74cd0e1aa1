#include <doctest.h>

#include "greenwalk/json_io.hpp"
#include "test_helpers.hpp"

using namespace greenwalk;
using namespace greenwalk::testing;

TEST_CASE("automorphism serialization round-trips bit-exactly") {
  TestRng rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    PlaneAutomorphism f = compose_word(random_reduced_word(rng, 3, 12));
    json j = automorphism_to_json(f);
    PlaneAutomorphism back = automorphism_from_json(j);
    CHECK(back == f);
    CHECK(automorphism_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("word serialization round-trips and preserves composition order") {
  TestRng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    AmalgamWord w = random_reduced_word(rng, 3, 12);
    json j = word_to_json(w);
    AmalgamWord back = word_from_json(j);
    REQUIRE(back.size() == w.size());
    for (size_t i = 0; i < w.size(); ++i) CHECK(syllable_equal(back.syllable(i), w.syllable(i)));
  }
}

TEST_CASE("canonical keys separate group elements and identify equal ones") {
  PlaneAutomorphism h = henon_quadratic();
  CHECK(canonical_key(h) == canonical_key(compose(h, PlaneAutomorphism::identity())));
  PlaneAutomorphism h2 = henon_map(y_squared(), gq(2));
  CHECK(canonical_key(h) != canonical_key(h2));
}

TEST_CASE("strict schemas reject unknown keys and malformed rationals") {
  json j;
  j["first"] = json::array();
  j["second"] = json::array();
  j["extra"] = 1;
  CHECK_THROWS_AS(automorphism_from_json(j), error);

  CHECK_THROWS_AS(rational_from_json(json("x/y")), error);
  CHECK_THROWS_AS(rational_from_json(json(12)), error);
  CHECK_THROWS_AS(gaussian_from_json(json::array({"1/2"})), error);

  json bad_syl;
  bad_syl["type"] = "spiral";
  CHECK_THROWS_AS(syllable_from_json(bad_syl), error);
}

TEST_CASE("gaussian coefficients with imaginary parts survive the trip") {
  PlanePolynomial p;
  p.add_term(1, 2, gq(3, 7, -5, 11));
  p.add_term(0, 0, gq(0, 1, 1, 3));
  json j = plane_poly_to_json(p);
  CHECK(plane_poly_from_json(j) == p);
}
