#include "greenwalk/json_io.hpp"

#include <set>

namespace greenwalk {

json rational_to_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw error(errc::config_error, "expected rational string, got " + j.dump());
  return Rational::from_string(j.get<std::string>());
}

json gaussian_to_json(const GaussianRational& z) {
  return json::array({z.re.to_string(), z.im.to_string()});
}

GaussianRational gaussian_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw error(errc::config_error, "expected [re, im] pair, got " + j.dump());
  }
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

json plane_poly_to_json(const PlanePolynomial& p) {
  json arr = json::array();
  for (const auto& [e, c] : p.terms()) {
    arr.push_back(json::array({e.first, e.second, c.re.to_string(), c.im.to_string()}));
  }
  return arr;
}

PlanePolynomial plane_poly_from_json(const json& j) {
  if (!j.is_array()) throw error(errc::config_error, "expected polynomial term array");
  PlanePolynomial p;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 4) {
      throw error(errc::config_error, "polynomial term must be [i, j, re, im]");
    }
    int i = t[0].get<int>(), k = t[1].get<int>();
    if (i < 0 || k < 0) throw error(errc::config_error, "negative exponent in polynomial term");
    p.add_term(i, k, {rational_from_json(t[2]), rational_from_json(t[3])});
  }
  return p;
}

json automorphism_to_json(const PlaneAutomorphism& f) {
  json j;
  j["first"] = plane_poly_to_json(f.first());
  j["second"] = plane_poly_to_json(f.second());
  return j;
}

PlaneAutomorphism automorphism_from_json(const json& j) {
  require_keys(j, {"first", "second"}, "automorphism");
  return PlaneAutomorphism::make(plane_poly_from_json(j.at("first")),
                                 plane_poly_from_json(j.at("second")));
}

json syllable_to_json(const Syllable& s) {
  json j;
  if (auto* a = std::get_if<AffineSyllable>(&s)) {
    j["type"] = "affine";
    j["matrix"] = json::array({json::array({gaussian_to_json(a->m00), gaussian_to_json(a->m01)}),
                               json::array({gaussian_to_json(a->m10), gaussian_to_json(a->m11)})});
    j["translation"] = json::array({gaussian_to_json(a->t0), gaussian_to_json(a->t1)});
  } else {
    const auto& e = std::get<ElementarySyllable>(s);
    j["type"] = "elementary";
    j["alpha"] = gaussian_to_json(e.alpha);
    j["beta"] = gaussian_to_json(e.beta);
    j["delta"] = gaussian_to_json(e.delta);
    json pt = json::array();
    for (const auto& [k, c] : e.p.terms()) {
      pt.push_back(json::array({k, c.re.to_string(), c.im.to_string()}));
    }
    j["p"] = pt;
  }
  return j;
}

Syllable syllable_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw error(errc::config_error, "syllable needs a type tag");
  }
  std::string type = j.at("type").get<std::string>();
  if (type == "affine") {
    require_keys(j, {"type", "matrix", "translation"}, "affine syllable");
    const json& m = j.at("matrix");
    const json& t = j.at("translation");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
        !m[1].is_array() || m[1].size() != 2 || !t.is_array() || t.size() != 2) {
      throw error(errc::config_error, "affine syllable needs 2x2 matrix and 2-vector");
    }
    return make_affine(gaussian_from_json(m[0][0]), gaussian_from_json(m[0][1]),
                       gaussian_from_json(m[1][0]), gaussian_from_json(m[1][1]),
                       gaussian_from_json(t[0]), gaussian_from_json(t[1]));
  }
  if (type == "elementary") {
    require_keys(j, {"type", "alpha", "beta", "delta", "p"}, "elementary syllable");
    UniPoly p;
    for (const auto& t : j.at("p")) {
      if (!t.is_array() || t.size() != 3) {
        throw error(errc::config_error, "elementary polynomial term must be [k, re, im]");
      }
      int k = t[0].get<int>();
      if (k < 0) throw error(errc::config_error, "negative exponent in elementary polynomial");
      p.add_term(k, {rational_from_json(t[1]), rational_from_json(t[2])});
    }
    return make_elementary(gaussian_from_json(j.at("alpha")), std::move(p),
                           gaussian_from_json(j.at("beta")), gaussian_from_json(j.at("delta")));
  }
  throw error(errc::config_error, "unknown syllable type: " + type);
}

json word_to_json(const AmalgamWord& w) {
  json arr = json::array();
  for (size_t i = 0; i < w.size(); ++i) arr.push_back(syllable_to_json(w.syllable(i)));
  return arr;
}

AmalgamWord word_from_json(const json& j) {
  if (!j.is_array()) throw error(errc::config_error, "word must be a syllable array");
  std::vector<Syllable> sy;
  sy.reserve(j.size());
  for (const auto& s : j) sy.push_back(syllable_from_json(s));
  return AmalgamWord::from_syllables(std::move(sy));
}

std::string canonical_key(const PlaneAutomorphism& f) { return automorphism_to_json(f).dump(); }

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!j.is_object()) throw error(errc::config_error, where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) {
      throw error(errc::config_error, "unknown key \"" + it.key() + "\" in " + where);
    }
  }
}

}  // namespace greenwalk
