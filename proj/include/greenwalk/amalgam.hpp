#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "greenwalk/polynomial.hpp"

namespace greenwalk {

// Invertible affine map (m00 x + m01 y + t0, m10 x + m11 y + t1).
struct AffineSyllable {
  GaussianRational m00, m01, m10, m11, t0, t1;

  GaussianRational det() const { return m00 * m11 - m01 * m10; }
  bool in_elementary() const { return m10.is_zero(); }  // membership in S = A cap E
  bool is_identity() const;
  friend bool operator==(const AffineSyllable& a, const AffineSyllable& b) {
    return a.m00 == b.m00 && a.m01 == b.m01 && a.m10 == b.m10 && a.m11 == b.m11 &&
           a.t0 == b.t0 && a.t1 == b.t1;
  }
};

// Elementary map (alpha x + p(y), beta y + delta), alpha*beta != 0.
struct ElementarySyllable {
  GaussianRational alpha, beta, delta;
  UniPoly p;

  int poly_degree() const { return p.is_zero() ? 0 : std::max(p.degree(), 0); }
  bool in_affine() const { return poly_degree() <= 1; }  // membership in S
  bool is_identity() const;
  friend bool operator==(const ElementarySyllable& a, const ElementarySyllable& b) {
    return a.alpha == b.alpha && a.beta == b.beta && a.delta == b.delta && a.p == b.p;
  }
};

using Syllable = std::variant<AffineSyllable, ElementarySyllable>;

AffineSyllable make_affine(GaussianRational m00, GaussianRational m01, GaussianRational m10,
                           GaussianRational m11, GaussianRational t0, GaussianRational t1);
ElementarySyllable make_elementary(GaussianRational alpha, UniPoly p, GaussianRational beta,
                                   GaussianRational delta);
AffineSyllable affine_identity();

// Closed-form syllable algebra; products taken in composition order L o R.
AffineSyllable affine_mul(const AffineSyllable& L, const AffineSyllable& R);
AffineSyllable affine_inverse(const AffineSyllable& a);
ElementarySyllable elementary_mul(const ElementarySyllable& L, const ElementarySyllable& R);
ElementarySyllable elementary_inverse(const ElementarySyllable& e);
ElementarySyllable affine_to_elementary(const AffineSyllable& a);  // requires a.in_elementary()
AffineSyllable elementary_to_affine(const ElementarySyllable& e);  // requires e.in_affine()

bool syllable_is_identity(const Syllable& s);
bool syllable_is_affine(const Syllable& s);
bool syllable_in_s(const Syllable& s);
int syllable_degree(const Syllable& s);
Syllable syllable_inverse(const Syllable& s);
PlaneAutomorphism syllable_automorphism(const Syllable& s);
bool syllable_equal(const Syllable& a, const Syllable& b);

// Word in the amalgamated product; reduced words alternate strictly between
// affine-not-elementary and elementary-not-affine syllables (a single
// syllable or the empty word being the exception).
class AmalgamWord {
 public:
  AmalgamWord() = default;
  // `syllables` listed in composition order: syllables[0] is applied last.
  static AmalgamWord from_syllables(std::vector<Syllable> syllables);

  size_t size() const { return rts_.size(); }
  bool empty() const { return rts_.empty(); }
  bool reduced() const { return reduced_; }
  // Composition-order access: syllable(0) is the leftmost factor.
  const Syllable& syllable(size_t i) const { return rts_[rts_.size() - 1 - i]; }
  // Application-order access: from_right(0) is applied first.
  const Syllable& from_right(size_t i) const { return rts_[i]; }

  // Internal storage is right-to-left so left multiplication is an append.
  const std::vector<Syllable>& storage() const { return rts_; }

  friend AmalgamWord reduce_word(const AmalgamWord& w);
  friend AmalgamWord invert_word(const AmalgamWord& w);
  friend class WordAccumulator;

 private:
  std::vector<Syllable> rts_;
  bool reduced_ = true;  // the empty word is reduced
};

// Merges the product (left o right) of two adjacent syllables when it lives
// in a single factor of the amalgam; Identity means total cancellation.
struct MergeResult {
  enum Kind { NoMerge, Identity, Merged } kind = NoMerge;
  Syllable value;
};
MergeResult try_merge(const Syllable& left, const Syllable& right);

AmalgamWord reduce_word(const AmalgamWord& w);
AmalgamWord invert_word(const AmalgamWord& w);
// w1 o w2, reduced.
AmalgamWord word_mul(const AmalgamWord& w1, const AmalgamWord& w2);
PlaneAutomorphism compose_word(const AmalgamWord& w, const Budget& budget = {});
// Syllable count of reduce_word(g^{-1} h); the edge metric on the tree.
long tree_distance(const AmalgamWord& g, const AmalgamWord& h);

// Degree-reduction loop peeling elementary factors until an affine map
// remains; the returned word is reduced and composes back to f exactly.
AmalgamWord jung_decompose(const PlaneAutomorphism& f, const Budget& budget = {});

struct WordClass {
  enum Kind { Elliptic, Loxodromic } kind = Elliptic;
  long long dynamical_degree = 1;
  long long translation_length = 0;
  AmalgamWord conjugator;  // conjugator^{-1} . w . conjugator = cyclic reduction
  AmalgamWord cyclic_word;
};

WordClass cyclic_reduce_classify(const AmalgamWord& w);

// Incremental builder for left products f_{n-1} ... f_0: appending a factor
// word on the left touches only the young end of the storage, and the
// lowest touched index is reported so callers can track prefix freezing.
class WordAccumulator {
 public:
  const AmalgamWord& word() const { return w_; }
  // Returns the smallest storage index modified by this multiplication.
  size_t left_multiply(const AmalgamWord& factor);

 private:
  AmalgamWord w_;
};

}  // namespace greenwalk
