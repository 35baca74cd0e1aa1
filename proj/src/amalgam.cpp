#include "greenwalk/amalgam.hpp"

#include <algorithm>

namespace greenwalk {

namespace {
const GaussianRational kOne{Rational(1)};
const GaussianRational kZero{};
}  // namespace

bool AffineSyllable::is_identity() const {
  return m00.is_one() && m01.is_zero() && m10.is_zero() && m11.is_one() && t0.is_zero() &&
         t1.is_zero();
}

bool ElementarySyllable::is_identity() const {
  return alpha.is_one() && beta.is_one() && delta.is_zero() && p.is_zero();
}

AffineSyllable make_affine(GaussianRational m00, GaussianRational m01, GaussianRational m10,
                           GaussianRational m11, GaussianRational t0, GaussianRational t1) {
  AffineSyllable a{std::move(m00), std::move(m01), std::move(m10), std::move(m11), std::move(t0),
                   std::move(t1)};
  if (a.det().is_zero()) throw error(errc::not_an_automorphism, "singular affine matrix");
  return a;
}

ElementarySyllable make_elementary(GaussianRational alpha, UniPoly p, GaussianRational beta,
                                   GaussianRational delta) {
  if (alpha.is_zero() || beta.is_zero()) {
    throw error(errc::not_an_automorphism, "elementary map with zero scaling");
  }
  return ElementarySyllable{std::move(alpha), std::move(beta), std::move(delta), std::move(p)};
}

AffineSyllable affine_identity() {
  return AffineSyllable{kOne, kZero, kZero, kOne, kZero, kZero};
}

AffineSyllable affine_mul(const AffineSyllable& L, const AffineSyllable& R) {
  AffineSyllable r;
  r.m00 = L.m00 * R.m00 + L.m01 * R.m10;
  r.m01 = L.m00 * R.m01 + L.m01 * R.m11;
  r.m10 = L.m10 * R.m00 + L.m11 * R.m10;
  r.m11 = L.m10 * R.m01 + L.m11 * R.m11;
  r.t0 = L.m00 * R.t0 + L.m01 * R.t1 + L.t0;
  r.t1 = L.m10 * R.t0 + L.m11 * R.t1 + L.t1;
  return r;
}

AffineSyllable affine_inverse(const AffineSyllable& a) {
  GaussianRational d = a.det();
  AffineSyllable r;
  r.m00 = a.m11 / d;
  r.m01 = -a.m01 / d;
  r.m10 = -a.m10 / d;
  r.m11 = a.m00 / d;
  r.t0 = -(r.m00 * a.t0 + r.m01 * a.t1);
  r.t1 = -(r.m10 * a.t0 + r.m11 * a.t1);
  return r;
}

ElementarySyllable elementary_mul(const ElementarySyllable& L, const ElementarySyllable& R) {
  ElementarySyllable r;
  r.alpha = L.alpha * R.alpha;
  r.beta = L.beta * R.beta;
  r.delta = L.beta * R.delta + L.delta;
  r.p = R.p.scale(L.alpha) + L.p.compose_linear(R.beta, R.delta);
  return r;
}

ElementarySyllable elementary_inverse(const ElementarySyllable& e) {
  ElementarySyllable r;
  r.alpha = e.alpha.inverse();
  r.beta = e.beta.inverse();
  r.delta = -e.delta / e.beta;
  r.p = e.p.compose_linear(r.beta, r.delta).scale(-r.alpha);
  return r;
}

ElementarySyllable affine_to_elementary(const AffineSyllable& a) {
  if (!a.in_elementary()) {
    throw error(errc::internal_error, "affine syllable outside the elementary group");
  }
  UniPoly p;
  p.add_term(1, a.m01);
  p.add_term(0, a.t0);
  return ElementarySyllable{a.m00, a.m11, a.t1, p};
}

AffineSyllable elementary_to_affine(const ElementarySyllable& e) {
  if (!e.in_affine()) {
    throw error(errc::internal_error, "elementary syllable outside the affine group");
  }
  return AffineSyllable{e.alpha, e.p.coeff(1), kZero, e.beta, e.p.coeff(0), e.delta};
}

bool syllable_is_identity(const Syllable& s) {
  return std::visit([](const auto& v) { return v.is_identity(); }, s);
}
bool syllable_is_affine(const Syllable& s) { return std::holds_alternative<AffineSyllable>(s); }
bool syllable_in_s(const Syllable& s) {
  if (auto* a = std::get_if<AffineSyllable>(&s)) return a->in_elementary();
  return std::get<ElementarySyllable>(s).in_affine();
}
int syllable_degree(const Syllable& s) {
  if (syllable_is_affine(s)) return 1;
  return std::max(1, std::get<ElementarySyllable>(s).poly_degree());
}
Syllable syllable_inverse(const Syllable& s) {
  if (auto* a = std::get_if<AffineSyllable>(&s)) return affine_inverse(*a);
  return elementary_inverse(std::get<ElementarySyllable>(s));
}
PlaneAutomorphism syllable_automorphism(const Syllable& s) {
  if (auto* a = std::get_if<AffineSyllable>(&s)) {
    PlanePolynomial f1, f2;
    f1.add_term(1, 0, a->m00);
    f1.add_term(0, 1, a->m01);
    f1.add_term(0, 0, a->t0);
    f2.add_term(1, 0, a->m10);
    f2.add_term(0, 1, a->m11);
    f2.add_term(0, 0, a->t1);
    return PlaneAutomorphism::make(std::move(f1), std::move(f2));
  }
  const auto& e = std::get<ElementarySyllable>(s);
  PlanePolynomial f1 = PlanePolynomial::from_unipoly_in_y(e.p);
  f1.add_term(1, 0, e.alpha);
  PlanePolynomial f2;
  f2.add_term(0, 1, e.beta);
  f2.add_term(0, 0, e.delta);
  return PlaneAutomorphism::make(std::move(f1), std::move(f2));
}
bool syllable_equal(const Syllable& a, const Syllable& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<AffineSyllable>(&a)) return *x == std::get<AffineSyllable>(b);
  return std::get<ElementarySyllable>(a) == std::get<ElementarySyllable>(b);
}

MergeResult try_merge(const Syllable& left, const Syllable& right) {
  const bool la = syllable_is_affine(left), ra = syllable_is_affine(right);
  Syllable merged;
  if (la && ra) {
    merged = affine_mul(std::get<AffineSyllable>(left), std::get<AffineSyllable>(right));
  } else if (!la && !ra) {
    merged =
        elementary_mul(std::get<ElementarySyllable>(left), std::get<ElementarySyllable>(right));
  } else if (la) {  // affine o elementary
    const auto& a = std::get<AffineSyllable>(left);
    const auto& e = std::get<ElementarySyllable>(right);
    if (a.in_elementary()) {
      merged = elementary_mul(affine_to_elementary(a), e);
    } else if (e.in_affine()) {
      merged = affine_mul(a, elementary_to_affine(e));
    } else {
      return {MergeResult::NoMerge, merged};
    }
  } else {  // elementary o affine
    const auto& e = std::get<ElementarySyllable>(left);
    const auto& a = std::get<AffineSyllable>(right);
    if (a.in_elementary()) {
      merged = elementary_mul(e, affine_to_elementary(a));
    } else if (e.in_affine()) {
      merged = affine_mul(elementary_to_affine(e), a);
    } else {
      return {MergeResult::NoMerge, merged};
    }
  }
  if (syllable_is_identity(merged)) return {MergeResult::Identity, merged};
  return {MergeResult::Merged, merged};
}

namespace {

// Appends one syllable at the left end (= back of right-to-left storage),
// cascading boundary merges. Returns the smallest storage index touched.
size_t append_syllable_left(std::vector<Syllable>& rts, const Syllable& s) {
  if (syllable_is_identity(s)) return rts.size();
  rts.push_back(s);
  size_t touched = rts.size() - 1;
  while (rts.size() >= 2) {
    MergeResult m = try_merge(rts[rts.size() - 1], rts[rts.size() - 2]);
    if (m.kind == MergeResult::NoMerge) break;
    rts.pop_back();
    rts.pop_back();
    touched = std::min(touched, rts.size());
    if (m.kind == MergeResult::Merged) {
      rts.push_back(m.value);
    } else {
      break;  // total cancellation; the remaining stack is already reduced
    }
  }
  return touched;
}

}  // namespace

AmalgamWord AmalgamWord::from_syllables(std::vector<Syllable> syllables) {
  AmalgamWord w;
  w.rts_.assign(syllables.rbegin(), syllables.rend());
  w.reduced_ = w.rts_.empty();
  return w;
}

AmalgamWord reduce_word(const AmalgamWord& w) {
  AmalgamWord out;
  out.rts_.reserve(w.rts_.size());
  for (const auto& s : w.rts_) append_syllable_left(out.rts_, s);
  out.reduced_ = true;
  return out;
}

AmalgamWord invert_word(const AmalgamWord& w) {
  AmalgamWord out;
  out.rts_.reserve(w.rts_.size());
  for (auto it = w.rts_.rbegin(); it != w.rts_.rend(); ++it) {
    out.rts_.push_back(syllable_inverse(*it));
  }
  out.reduced_ = w.reduced_;
  return out;
}

AmalgamWord word_mul(const AmalgamWord& w1, const AmalgamWord& w2) {
  WordAccumulator acc;
  acc.left_multiply(w2);
  acc.left_multiply(w1);
  return acc.word();
}

PlaneAutomorphism compose_word(const AmalgamWord& w, const Budget& budget) {
  PlaneAutomorphism acc = PlaneAutomorphism::identity();
  for (const auto& s : w.storage()) {
    acc = compose(syllable_automorphism(s), acc, budget);
  }
  return acc;
}

long tree_distance(const AmalgamWord& g, const AmalgamWord& h) {
  if (!g.reduced() || !h.reduced()) throw error(errc::word_not_reduced, "tree_distance needs reduced words");
  return static_cast<long>(word_mul(invert_word(g), h).size());
}

namespace {
AffineSyllable swap_affine() {
  return AffineSyllable{kZero, kOne, kOne, kZero, kZero, kZero};
}
}  // namespace

AmalgamWord jung_decompose(const PlaneAutomorphism& f, const Budget& budget) {
  PlanePolynomial c1 = f.first(), c2 = f.second();
  std::vector<Syllable> peeled;  // factors applied on the left of the running map
  long guard = 8L * (std::max(c1.degree(), 1) + std::max(c2.degree(), 1)) + 32;
  while (std::max(c1.degree(), c2.degree()) > 1) {
    if (--guard < 0) {
      throw error(errc::not_an_automorphism, "degree reduction loop failed to terminate");
    }
    int d1 = c1.degree(), d2 = c2.degree();
    if (d1 < d2) {
      std::swap(c1, c2);
      peeled.emplace_back(swap_affine());
      continue;
    }
    if (d2 < 1 || d1 % d2 != 0) {
      throw error(errc::not_an_automorphism, "coordinate top degrees are incompatible");
    }
    int k = d1 / d2;
    PlanePolynomial p2k = c2.pow(k, budget);
    PlanePolynomial t2k = p2k.top_form();
    PlanePolynomial t1 = c1.top_form();
    auto lead = t2k.terms().begin();
    GaussianRational ratio = t1.coeff(lead->first.first, lead->first.second) / lead->second;
    if (ratio.is_zero() || t1 != t2k.scale(ratio)) {
      throw error(errc::not_an_automorphism,
                  "top form is not a scalar multiple of the required power");
    }
    c1 = c1 - p2k.scale(ratio);
    if (c1.degree() >= d1) {
      throw error(errc::not_an_automorphism, "degree did not drop after peeling");
    }
    UniPoly mono = UniPoly::monomial(k, -ratio);
    peeled.emplace_back(make_elementary(kOne, std::move(mono), kOne, kZero));
  }
  if (c1.degree() < 0 || c2.degree() < 0) {
    throw error(errc::not_an_automorphism, "degenerate coordinate polynomial");
  }
  AffineSyllable tail = make_affine(c1.coeff(1, 0), c1.coeff(0, 1), c2.coeff(1, 0),
                                    c2.coeff(0, 1), c1.coeff(0, 0), c2.coeff(0, 0));
  std::vector<Syllable> syllables;
  syllables.reserve(peeled.size() + 1);
  for (const auto& u : peeled) syllables.push_back(syllable_inverse(u));
  syllables.emplace_back(tail);
  return reduce_word(AmalgamWord::from_syllables(std::move(syllables)));
}

WordClass cyclic_reduce_classify(const AmalgamWord& w) {
  if (!w.reduced()) throw error(errc::word_not_reduced, "classification needs a reduced word");
  AmalgamWord cur = w;
  std::vector<Syllable> conj;
  while (cur.size() >= 2 &&
         syllable_is_affine(cur.syllable(0)) == syllable_is_affine(cur.syllable(cur.size() - 1))) {
    Syllable head = cur.syllable(0);
    std::vector<Syllable> rotated;
    rotated.reserve(cur.size());
    for (size_t i = 1; i < cur.size(); ++i) rotated.push_back(cur.syllable(i));
    rotated.push_back(head);
    conj.push_back(std::move(head));
    cur = reduce_word(AmalgamWord::from_syllables(std::move(rotated)));
  }
  WordClass out;
  out.conjugator = reduce_word(AmalgamWord::from_syllables(std::move(conj)));
  out.cyclic_word = cur;
  if (cur.size() <= 1) {
    out.kind = WordClass::Elliptic;
    out.dynamical_degree = 1;
    out.translation_length = 0;
    return out;
  }
  out.kind = WordClass::Loxodromic;
  out.translation_length = static_cast<long long>(cur.size());
  long long lambda = 1;
  for (size_t i = 0; i < cur.size(); ++i) {
    long long d = syllable_degree(cur.syllable(i));
    if (lambda > (4LL << 60) / std::max<long long>(d, 1)) {
      throw error(errc::budget_exceeded, "dynamical degree overflows 64-bit range");
    }
    lambda *= d;
  }
  out.dynamical_degree = lambda;
  return out;
}

size_t WordAccumulator::left_multiply(const AmalgamWord& factor) {
  size_t min_touched = w_.rts_.size();
  for (const auto& s : factor.storage()) {
    min_touched = std::min(min_touched, append_syllable_left(w_.rts_, s));
  }
  w_.reduced_ = true;
  return min_touched;
}

}  // namespace greenwalk
