#pragma once

#include <string>

#include <json.hpp>

#include "greenwalk/amalgam.hpp"
#include "greenwalk/polynomial.hpp"

namespace greenwalk {

using json = nlohmann::json;

// Rationals travel as exact "num/den" strings; Gaussian rationals as
// ["re","im"] pairs. Round trips are bit-exact.
json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);
json gaussian_to_json(const GaussianRational& z);
GaussianRational gaussian_from_json(const json& j);

// {"first": [[i,j,"re","im"],...], "second": [...]}
json automorphism_to_json(const PlaneAutomorphism& f);
PlaneAutomorphism automorphism_from_json(const json& j);
json plane_poly_to_json(const PlanePolynomial& p);
PlanePolynomial plane_poly_from_json(const json& j);

// Tagged syllable list in composition order.
json syllable_to_json(const Syllable& s);
Syllable syllable_from_json(const json& j);
json word_to_json(const AmalgamWord& w);
AmalgamWord word_from_json(const json& j);

// Deterministic exact-equality key for hashing group elements.
std::string canonical_key(const PlaneAutomorphism& f);

// Strict schema helper: rejects keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where);

}  // namespace greenwalk
