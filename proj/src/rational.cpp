#include "greenwalk/rational.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace greenwalk {

BigInt::BigInt(const std::string& decimal) {
  if (mpz_init_set_str(z_, decimal.c_str(), 10) != 0) {
    mpz_clear(z_);
    mpz_init(z_);
    throw error(errc::config_error, "invalid integer literal: " + decimal);
  }
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_add(r.z_, a.z_, b.z_);
  return r;
}
BigInt operator-(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_sub(r.z_, a.z_, b.z_);
  return r;
}
BigInt operator*(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_mul(r.z_, a.z_, b.z_);
  return r;
}
BigInt operator/(const BigInt& a, const BigInt& b) {
  if (b.is_zero()) throw error(errc::internal_error, "BigInt division by zero");
  BigInt r;
  mpz_tdiv_q(r.z_, a.z_, b.z_);
  return r;
}
BigInt operator%(const BigInt& a, const BigInt& b) {
  if (b.is_zero()) throw error(errc::internal_error, "BigInt modulo by zero");
  BigInt r;
  mpz_tdiv_r(r.z_, a.z_, b.z_);
  return r;
}
BigInt BigInt::operator-() const {
  BigInt r;
  mpz_neg(r.z_, z_);
  return r;
}
BigInt BigInt::abs() const {
  BigInt r;
  mpz_abs(r.z_, z_);
  return r;
}
BigInt BigInt::pow(unsigned long e) const {
  BigInt r;
  mpz_pow_ui(r.z_, z_, e);
  return r;
}
BigInt BigInt::gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.z_, a.z_, b.z_);
  return r;
}
BigInt BigInt::lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.z_, a.z_, b.z_);
  return r;
}
bool BigInt::fits_u64() const {
  return mpz_sgn(z_) >= 0 && mpz_sizeinbase(z_, 2) <= 64;
}
std::uint64_t BigInt::to_u64() const {
  std::uint64_t lo = mpz_get_ui(z_);
  if (mpz_sizeinbase(z_, 2) > 8 * sizeof(unsigned long)) {
    // 32-bit unsigned long platforms would need a second limb; not supported.
    throw error(errc::internal_error, "BigInt::to_u64 on narrow unsigned long");
  }
  return lo;
}
double BigInt::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exp2 = 0;
  double m = mpz_get_d_2exp(&exp2, z_);
  return std::log(std::abs(m)) + static_cast<double>(exp2) * M_LN2;
}
std::string BigInt::to_string() const {
  char* s = mpz_get_str(nullptr, 10, z_);
  std::string out(s);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

Rational::Rational(long num, long den) {
  mpq_init(q_);
  if (den == 0) throw error(errc::internal_error, "rational with zero denominator");
  mpq_set_si(q_, num, 1);
  mpq_t d;
  mpq_init(d);
  mpq_set_si(d, den, 1);
  mpq_div(q_, q_, d);
  mpq_clear(d);
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  mpq_init(q_);
  if (den.is_zero()) throw error(errc::internal_error, "rational with zero denominator");
  mpq_set_num(q_, num.raw());
  mpq_set_den(q_, den.raw());
  mpq_canonicalize(q_);
}

Rational Rational::from_string(const std::string& s) {
  Rational r;
  if (mpq_set_str(r.q_, s.c_str(), 10) != 0) {
    throw error(errc::config_error, "invalid rational literal: " + s);
  }
  if (mpz_sgn(mpq_denref(r.q_)) == 0) {
    throw error(errc::config_error, "zero denominator in rational literal: " + s);
  }
  mpq_canonicalize(r.q_);
  return r;
}

Rational Rational::from_double(double d) {
  if (!std::isfinite(d)) throw error(errc::internal_error, "from_double on non-finite value");
  Rational r;
  mpq_set_d(r.q_, d);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  Rational r;
  mpq_add(r.q_, a.q_, b.q_);
  return r;
}
Rational operator-(const Rational& a, const Rational& b) {
  Rational r;
  mpq_sub(r.q_, a.q_, b.q_);
  return r;
}
Rational operator*(const Rational& a, const Rational& b) {
  Rational r;
  mpq_mul(r.q_, a.q_, b.q_);
  return r;
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw error(errc::internal_error, "rational division by zero");
  Rational r;
  mpq_div(r.q_, a.q_, b.q_);
  return r;
}
Rational Rational::operator-() const {
  Rational r;
  mpq_neg(r.q_, q_);
  return r;
}
Rational& Rational::operator+=(const Rational& o) {
  mpq_add(q_, q_, o.q_);
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  mpq_sub(q_, q_, o.q_);
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  mpq_mul(q_, q_, o.q_);
  return *this;
}

Rational Rational::abs() const {
  Rational r;
  mpq_abs(r.q_, q_);
  return r;
}
Rational Rational::inverse() const {
  if (is_zero()) throw error(errc::internal_error, "inverse of zero rational");
  Rational r;
  mpq_inv(r.q_, q_);
  return r;
}
Rational Rational::pow(long e) const {
  if (e == 0) return Rational(1);
  Rational base = e > 0 ? *this : inverse();
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  Rational r;
  mpz_pow_ui(mpq_numref(r.q_), mpq_numref(base.q_), n);
  mpz_pow_ui(mpq_denref(r.q_), mpq_denref(base.q_), n);
  return r;  // canonical since base was canonical
}

BigInt Rational::num() const {
  BigInt n;
  mpz_set(n.raw(), mpq_numref(q_));
  return n;
}
BigInt Rational::den() const {
  BigInt d;
  mpz_set(d.raw(), mpq_denref(q_));
  return d;
}
BigInt Rational::ceil() const {
  BigInt c;
  mpz_cdiv_q(c.raw(), mpq_numref(q_), mpq_denref(q_));
  return c;
}

double Rational::log() const {
  if (sign() <= 0) throw error(errc::internal_error, "log of non-positive rational");
  return num().log_abs() - den().log_abs();
}

size_t Rational::bit_size() const {
  return std::max(mpz_sizeinbase(mpq_numref(q_), 2), mpz_sizeinbase(mpq_denref(q_), 2));
}

std::string Rational::to_string() const { return num().to_string() + "/" + den().to_string(); }

std::complex<double> GaussianRational::to_complex() const {
  return {re.to_double(), im.to_double()};
}

namespace {
// mantissa * 2^exp decomposition of a rational, mantissa in (-1,1).
void decompose_2exp(const Rational& r, double* mantissa, long* exp2) {
  if (r.is_zero()) {
    *mantissa = 0.0;
    *exp2 = 0;
    return;
  }
  long en = 0, ed = 0;
  BigInt n = r.num(), d = r.den();
  double a = mpz_get_d_2exp(&en, n.raw());
  double b = mpz_get_d_2exp(&ed, d.raw());
  *mantissa = a / b;
  *exp2 = en - ed;
}
}  // namespace

double GaussianRational::arg() const {
  if (is_zero()) return 0.0;
  // Scale both parts by a common power of two before atan2 so the quotient
  // stays finite for coefficients far outside double range.
  double mr = 0.0, mi = 0.0;
  long er = 0, ei = 0;
  decompose_2exp(re, &mr, &er);
  decompose_2exp(im, &mi, &ei);
  long e_max = std::max(re.is_zero() ? ei : er, im.is_zero() ? er : ei);
  auto rescale = [&](double m, long e) -> double {
    if (m == 0.0) return 0.0;
    long shift = e - e_max;
    if (shift < -1000) return 0.0;
    return std::ldexp(m, static_cast<int>(shift));
  };
  return std::atan2(rescale(mi, ei), rescale(mr, er));
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw error(errc::internal_error, "inverse of zero Gaussian rational");
  Rational n2 = norm2();
  return {re / n2, -im / n2};
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
  return a * b.inverse();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }
std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
  return os << z.re.to_string() << "+" << z.im.to_string() << "i";
}

}  // namespace greenwalk
