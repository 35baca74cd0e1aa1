#pragma once

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "greenwalk/rational.hpp"

namespace greenwalk {

// Per-coefficient bit cap for exact composition chains. Degree-2^k prefixes
// blow up fast; exceeding the cap raises errc::budget_exceeded instead of
// thrashing.
struct Budget {
  long max_coeff_bits = 1L << 20;
};

// Univariate polynomial over Q(i), sparse.
class UniPoly {
 public:
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  UniPoly() = default;
  static UniPoly constant(GaussianRational c);
  static UniPoly monomial(int k, GaussianRational c);

  int degree() const { return terms_.empty() ? kZeroDegree : terms_.rbegin()->first; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<int, GaussianRational>& terms() const { return terms_; }
  GaussianRational coeff(int k) const;
  GaussianRational leading() const;

  void add_term(int k, const GaussianRational& c);
  UniPoly scale(const GaussianRational& c) const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  GaussianRational eval(const GaussianRational& y) const;
  // p(a*y + b), expanded exactly.
  UniPoly compose_linear(const GaussianRational& a, const GaussianRational& b) const;
  UniPoly derivative() const;

  size_t max_coeff_bits() const;

 private:
  std::map<int, GaussianRational> terms_;  // exponent -> nonzero coefficient
};

// Sparse bivariate polynomial over Q(i). No zero coefficients stored; the
// zero polynomial has an empty term map and degree() = kZeroDegree.
class PlanePolynomial {
 public:
  using Exp = std::pair<int, int>;  // (i, j) for x^i y^j
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  PlanePolynomial() = default;
  static PlanePolynomial constant(GaussianRational c);
  static PlanePolynomial variable_x();
  static PlanePolynomial variable_y();
  static PlanePolynomial monomial(int i, int j, GaussianRational c);
  // Embeds p(y) (or p(x)) into the plane.
  static PlanePolynomial from_unipoly_in_y(const UniPoly& p);
  static PlanePolynomial from_unipoly_in_x(const UniPoly& p);

  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exp, GaussianRational>& terms() const { return terms_; }
  GaussianRational coeff(int i, int j) const;
  size_t term_count() const { return terms_.size(); }

  void add_term(int i, int j, const GaussianRational& c);

  friend PlanePolynomial operator+(const PlanePolynomial& a, const PlanePolynomial& b);
  friend PlanePolynomial operator-(const PlanePolynomial& a, const PlanePolynomial& b);
  friend PlanePolynomial operator*(const PlanePolynomial& a, const PlanePolynomial& b);
  PlanePolynomial scale(const GaussianRational& c) const;
  PlanePolynomial pow(int e, const Budget& budget) const;
  friend bool operator==(const PlanePolynomial& a, const PlanePolynomial& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const PlanePolynomial& a, const PlanePolynomial& b) { return !(a == b); }

  PlanePolynomial derivative_x() const;
  PlanePolynomial derivative_y() const;
  // Homogeneous part of top degree.
  PlanePolynomial top_form() const;

  GaussianRational eval_exact(const GaussianRational& x, const GaussianRational& y) const;
  std::complex<double> eval(const std::complex<double>& x, const std::complex<double>& y) const;

  // Substitution (x,y) -> (px, py).
  PlanePolynomial compose(const PlanePolynomial& px, const PlanePolynomial& py,
                          const Budget& budget) const;

  size_t max_coeff_bits() const;
  double coeff_mag_sum() const;  // sum of |c| upper bounds, as double

 private:
  void check_budget(const Budget& budget) const;
  std::map<Exp, GaussianRational> terms_;
};

// Polynomial automorphism candidate: pair of coordinate polynomials with
// constant nonzero Jacobian (validated at construction).
class PlaneAutomorphism {
 public:
  // Throws errc::non_constant_jacobian when the formal Jacobian determinant
  // is non-constant or zero.
  static PlaneAutomorphism make(PlanePolynomial first, PlanePolynomial second);
  static PlaneAutomorphism identity();

  const PlanePolynomial& first() const { return first_; }
  const PlanePolynomial& second() const { return second_; }
  const GaussianRational& jacobian() const { return jac_; }
  int degree() const { return degree_; }
  bool is_identity() const;

  std::pair<GaussianRational, GaussianRational> apply_exact(const GaussianRational& x,
                                                            const GaussianRational& y) const;
  // Differential as a row-major 2x2 complex matrix at a (bounded) point.
  std::array<std::complex<double>, 4> differential(const std::complex<double>& x,
                                                   const std::complex<double>& y) const;

  friend bool operator==(const PlaneAutomorphism& a, const PlaneAutomorphism& b) {
    return a.first_ == b.first_ && a.second_ == b.second_;
  }
  friend bool operator!=(const PlaneAutomorphism& a, const PlaneAutomorphism& b) {
    return !(a == b);
  }

 private:
  PlaneAutomorphism() = default;
  PlanePolynomial first_, second_;
  GaussianRational jac_;
  int degree_ = 0;
};

// result(q) = f(g(q)); jacobians multiply.
PlaneAutomorphism compose(const PlaneAutomorphism& f, const PlaneAutomorphism& g,
                          const Budget& budget = {});

// (degree, jacobian) of a candidate pair; rejects non-constant Jacobians.
std::pair<int, GaussianRational> degree_and_jacobian(const PlanePolynomial& first,
                                                     const PlanePolynomial& second);

// Point of C^2 in scaled form: value = e^{log_norm} * (dx, dy) with
// max(|dx|,|dy|) = 1. Carrier for orbits far beyond double range; sup norm
// throughout.
struct ScaledPoint {
  std::complex<double> dx{0.0, 0.0};
  std::complex<double> dy{0.0, 0.0};
  double log_norm = -std::numeric_limits<double>::infinity();
  bool bounded = true;

  bool is_origin() const { return log_norm == -std::numeric_limits<double>::infinity(); }
  double log_plus_norm() const { return log_norm > 0.0 ? log_norm : 0.0; }
};

ScaledPoint make_scaled(const std::complex<double>& x, const std::complex<double>& y);
ScaledPoint make_scaled_exact(const GaussianRational& x, const GaussianRational& y);
// Reconstructs coordinates; only valid when representable (log_norm <~ 700).
std::pair<std::complex<double>, std::complex<double>> point_value(const ScaledPoint& q);

// Overflow-safe evaluation. Relative error stays at a small multiple of ulp
// per term; throws errc::precision_loss when catastrophic cancellation is
// detected at large scale (caller falls back to exact arithmetic).
ScaledPoint eval_scaled(const PlaneAutomorphism& f, const ScaledPoint& q);

}  // namespace greenwalk
