#include "greenwalk/polynomial.hpp"

#include <array>
#include <cmath>

namespace greenwalk {

UniPoly UniPoly::constant(GaussianRational c) {
  UniPoly p;
  p.add_term(0, c);
  return p;
}
UniPoly UniPoly::monomial(int k, GaussianRational c) {
  UniPoly p;
  p.add_term(k, c);
  return p;
}
GaussianRational UniPoly::coeff(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? GaussianRational() : it->second;
}
GaussianRational UniPoly::leading() const {
  if (terms_.empty()) return GaussianRational();
  return terms_.rbegin()->second;
}
void UniPoly::add_term(int k, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}
UniPoly UniPoly::scale(const GaussianRational& c) const {
  UniPoly r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
  return r;
}
UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  UniPoly r = a;
  for (const auto& [k, v] : b.terms_) r.add_term(k, v);
  return r;
}
UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  UniPoly r = a;
  for (const auto& [k, v] : b.terms_) r.add_term(k, -v);
  return r;
}
UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  UniPoly r;
  for (const auto& [ka, va] : a.terms_)
    for (const auto& [kb, vb] : b.terms_) r.add_term(ka + kb, va * vb);
  return r;
}
GaussianRational UniPoly::eval(const GaussianRational& y) const {
  // Horner over the sparse exponent ladder.
  GaussianRational acc;
  int prev = -1;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (prev < 0) {
      acc = it->second;
    } else {
      for (int k = 0; k < prev - it->first; ++k) acc = acc * y;
      acc = acc + it->second;
    }
    prev = it->first;
  }
  if (prev < 0) return GaussianRational();
  for (int k = 0; k < prev; ++k) acc = acc * y;
  return acc;
}
UniPoly UniPoly::compose_linear(const GaussianRational& a, const GaussianRational& b) const {
  // p(a*y + b) via Horner.
  UniPoly lin;
  lin.add_term(1, a);
  lin.add_term(0, b);
  UniPoly acc;
  int prev = -1;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (prev < 0) {
      acc = UniPoly::constant(it->second);
    } else {
      for (int k = 0; k < prev - it->first; ++k) acc = acc * lin;
      acc = acc + UniPoly::constant(it->second);
    }
    prev = it->first;
  }
  if (prev < 0) return UniPoly();
  for (int k = 0; k < prev; ++k) acc = acc * lin;
  return acc;
}
UniPoly UniPoly::derivative() const {
  UniPoly r;
  for (const auto& [k, v] : terms_) {
    if (k > 0) r.add_term(k - 1, v * GaussianRational(Rational(k)));
  }
  return r;
}
size_t UniPoly::max_coeff_bits() const {
  size_t m = 0;
  for (const auto& [k, v] : terms_) m = std::max(m, v.bit_size());
  return m;
}

PlanePolynomial PlanePolynomial::constant(GaussianRational c) {
  PlanePolynomial p;
  p.add_term(0, 0, c);
  return p;
}
PlanePolynomial PlanePolynomial::variable_x() { return monomial(1, 0, GaussianRational(1)); }
PlanePolynomial PlanePolynomial::variable_y() { return monomial(0, 1, GaussianRational(1)); }
PlanePolynomial PlanePolynomial::monomial(int i, int j, GaussianRational c) {
  PlanePolynomial p;
  p.add_term(i, j, c);
  return p;
}
PlanePolynomial PlanePolynomial::from_unipoly_in_y(const UniPoly& p) {
  PlanePolynomial r;
  for (const auto& [k, v] : p.terms()) r.add_term(0, k, v);
  return r;
}
PlanePolynomial PlanePolynomial::from_unipoly_in_x(const UniPoly& p) {
  PlanePolynomial r;
  for (const auto& [k, v] : p.terms()) r.add_term(k, 0, v);
  return r;
}
int PlanePolynomial::degree() const {
  if (terms_.empty()) return kZeroDegree;
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}
GaussianRational PlanePolynomial::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? GaussianRational() : it->second;
}
void PlanePolynomial::add_term(int i, int j, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(Exp{i, j}, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}
PlanePolynomial operator+(const PlanePolynomial& a, const PlanePolynomial& b) {
  PlanePolynomial r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e.first, e.second, c);
  return r;
}
PlanePolynomial operator-(const PlanePolynomial& a, const PlanePolynomial& b) {
  PlanePolynomial r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e.first, e.second, -c);
  return r;
}
PlanePolynomial operator*(const PlanePolynomial& a, const PlanePolynomial& b) {
  PlanePolynomial r;
  if (a.terms_.empty() || b.terms_.empty()) return r;
  int ax = 0, ay = 0, bx = 0, by = 0;
  for (const auto& [e, c] : a.terms_) {
    ax = std::max(ax, e.first);
    ay = std::max(ay, e.second);
  }
  for (const auto& [e, c] : b.terms_) {
    bx = std::max(bx, e.first);
    by = std::max(by, e.second);
  }
  const long nx = ax + bx + 1, ny = ay + by + 1;
  if (nx * ny <= 32768) {
    // dense accumulation grid: skips the tree churn on big products
    std::vector<GaussianRational> grid(static_cast<size_t>(nx * ny));
    std::vector<char> used(static_cast<size_t>(nx * ny), 0);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        size_t idx = static_cast<size_t>((ea.first + eb.first) * ny + ea.second + eb.second);
        grid[idx] += ca * cb;
        used[idx] = 1;
      }
    }
    for (long i = 0; i <= ax + bx; ++i) {
      for (long j = 0; j <= ay + by; ++j) {
        size_t idx = static_cast<size_t>(i * ny + j);
        if (used[idx] && !grid[idx].is_zero()) {
          r.terms_.emplace_hint(r.terms_.end(), PlanePolynomial::Exp{i, j}, std::move(grid[idx]));
        }
      }
    }
    return r;
  }
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return r;
}
PlanePolynomial PlanePolynomial::scale(const GaussianRational& c) const {
  PlanePolynomial r;
  if (c.is_zero()) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
  return r;
}
void PlanePolynomial::check_budget(const Budget& budget) const {
  if (static_cast<long>(max_coeff_bits()) > budget.max_coeff_bits) {
    throw error(errc::budget_exceeded, "coefficient bit budget exceeded");
  }
}
PlanePolynomial PlanePolynomial::pow(int e, const Budget& budget) const {
  PlanePolynomial r = constant(GaussianRational(1));
  for (int k = 0; k < e; ++k) {
    r = r * (*this);
    r.check_budget(budget);
  }
  return r;
}
PlanePolynomial PlanePolynomial::derivative_x() const {
  PlanePolynomial r;
  for (const auto& [e, c] : terms_) {
    if (e.first > 0) r.add_term(e.first - 1, e.second, c * GaussianRational(Rational(e.first)));
  }
  return r;
}
PlanePolynomial PlanePolynomial::derivative_y() const {
  PlanePolynomial r;
  for (const auto& [e, c] : terms_) {
    if (e.second > 0) r.add_term(e.first, e.second - 1, c * GaussianRational(Rational(e.second)));
  }
  return r;
}
PlanePolynomial PlanePolynomial::top_form() const {
  PlanePolynomial r;
  int d = degree();
  if (d == kZeroDegree) return r;
  for (const auto& [e, c] : terms_) {
    if (e.first + e.second == d) r.add_term(e.first, e.second, c);
  }
  return r;
}
GaussianRational PlanePolynomial::eval_exact(const GaussianRational& x,
                                             const GaussianRational& y) const {
  // Cache powers; degrees stay modest on exact paths.
  int dx = 0, dy = 0;
  for (const auto& [e, c] : terms_) {
    dx = std::max(dx, e.first);
    dy = std::max(dy, e.second);
  }
  std::vector<GaussianRational> px(dx + 1), py(dy + 1);
  px[0] = GaussianRational(1);
  for (int i = 1; i <= dx; ++i) px[i] = px[i - 1] * x;
  py[0] = GaussianRational(1);
  for (int j = 1; j <= dy; ++j) py[j] = py[j - 1] * y;
  GaussianRational acc;
  for (const auto& [e, c] : terms_) acc = acc + c * px[e.first] * py[e.second];
  return acc;
}
std::complex<double> PlanePolynomial::eval(const std::complex<double>& x,
                                           const std::complex<double>& y) const {
  int dx = 0, dy = 0;
  for (const auto& [e, c] : terms_) {
    dx = std::max(dx, e.first);
    dy = std::max(dy, e.second);
  }
  std::vector<std::complex<double>> px(dx + 1), py(dy + 1);
  px[0] = 1.0;
  for (int i = 1; i <= dx; ++i) px[i] = px[i - 1] * x;
  py[0] = 1.0;
  for (int j = 1; j <= dy; ++j) py[j] = py[j - 1] * y;
  std::complex<double> acc = 0.0;
  for (const auto& [e, c] : terms_) acc += c.to_complex() * px[e.first] * py[e.second];
  return acc;
}
PlanePolynomial PlanePolynomial::compose(const PlanePolynomial& px, const PlanePolynomial& py,
                                         const Budget& budget) const {
  int dx = 0, dy = 0;
  for (const auto& [e, c] : terms_) {
    dx = std::max(dx, e.first);
    dy = std::max(dy, e.second);
  }
  std::vector<PlanePolynomial> xp(dx + 1), yp(dy + 1);
  xp[0] = constant(GaussianRational(1));
  for (int i = 1; i <= dx; ++i) {
    xp[i] = xp[i - 1] * px;
    xp[i].check_budget(budget);
  }
  yp[0] = constant(GaussianRational(1));
  for (int j = 1; j <= dy; ++j) {
    yp[j] = yp[j - 1] * py;
    yp[j].check_budget(budget);
  }
  PlanePolynomial acc;
  for (const auto& [e, c] : terms_) {
    acc = acc + (xp[e.first] * yp[e.second]).scale(c);
    acc.check_budget(budget);
  }
  return acc;
}
size_t PlanePolynomial::max_coeff_bits() const {
  size_t m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, c.bit_size());
  return m;
}
double PlanePolynomial::coeff_mag_sum() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += c.mag_ub().to_double();
  return s;
}

std::pair<int, GaussianRational> degree_and_jacobian(const PlanePolynomial& first,
                                                     const PlanePolynomial& second) {
  PlanePolynomial jac = first.derivative_x() * second.derivative_y() -
                        first.derivative_y() * second.derivative_x();
  if (jac.is_zero() || jac.degree() != 0) {
    throw error(errc::non_constant_jacobian,
                "Jacobian determinant is not a nonzero constant");
  }
  int deg = std::max(first.degree(), second.degree());
  if (deg < 1) {
    throw error(errc::non_constant_jacobian, "coordinate polynomials are constant");
  }
  return {deg, jac.coeff(0, 0)};
}

PlaneAutomorphism PlaneAutomorphism::make(PlanePolynomial first, PlanePolynomial second) {
  auto [deg, jac] = degree_and_jacobian(first, second);
  PlaneAutomorphism f;
  f.first_ = std::move(first);
  f.second_ = std::move(second);
  f.jac_ = jac;
  f.degree_ = deg;
  return f;
}
PlaneAutomorphism PlaneAutomorphism::identity() {
  return make(PlanePolynomial::variable_x(), PlanePolynomial::variable_y());
}
bool PlaneAutomorphism::is_identity() const {
  return first_ == PlanePolynomial::variable_x() && second_ == PlanePolynomial::variable_y();
}
std::pair<GaussianRational, GaussianRational> PlaneAutomorphism::apply_exact(
    const GaussianRational& x, const GaussianRational& y) const {
  return {first_.eval_exact(x, y), second_.eval_exact(x, y)};
}
std::array<std::complex<double>, 4> PlaneAutomorphism::differential(
    const std::complex<double>& x, const std::complex<double>& y) const {
  return {first_.derivative_x().eval(x, y), first_.derivative_y().eval(x, y),
          second_.derivative_x().eval(x, y), second_.derivative_y().eval(x, y)};
}

PlaneAutomorphism compose(const PlaneAutomorphism& f, const PlaneAutomorphism& g,
                          const Budget& budget) {
  PlanePolynomial c1 = f.first().compose(g.first(), g.second(), budget);
  PlanePolynomial c2 = f.second().compose(g.first(), g.second(), budget);
  return PlaneAutomorphism::make(std::move(c1), std::move(c2));
}

ScaledPoint make_scaled(const std::complex<double>& x, const std::complex<double>& y) {
  ScaledPoint q;
  double m = std::max(std::abs(x), std::abs(y));
  if (m == 0.0) return q;  // origin sentinel
  q.dx = x / m;
  q.dy = y / m;
  q.log_norm = std::log(m);
  q.bounded = q.log_norm <= 700.0;
  return q;
}

ScaledPoint make_scaled_exact(const GaussianRational& x, const GaussianRational& y) {
  // Route through 2-exponent mantissas so huge exact coordinates normalize
  // without overflow.
  double lx = x.is_zero() ? -std::numeric_limits<double>::infinity() : x.log_abs();
  double ly = y.is_zero() ? -std::numeric_limits<double>::infinity() : y.log_abs();
  double L = std::max(lx, ly);
  if (L == -std::numeric_limits<double>::infinity()) return {};
  ScaledPoint q;
  q.log_norm = L;
  double ax = x.is_zero() ? 0.0 : std::exp(lx - L);
  double ay = y.is_zero() ? 0.0 : std::exp(ly - L);
  q.dx = ax == 0.0 ? std::complex<double>(0.0) : std::polar(ax, x.arg());
  q.dy = ay == 0.0 ? std::complex<double>(0.0) : std::polar(ay, y.arg());
  q.bounded = q.log_norm <= 700.0;
  return q;
}

std::pair<std::complex<double>, std::complex<double>> point_value(const ScaledPoint& q) {
  if (q.is_origin()) return {{0.0, 0.0}, {0.0, 0.0}};
  double s = std::exp(q.log_norm);
  return {q.dx * s, q.dy * s};
}

namespace {

struct LogCoord {
  double log_mag = -std::numeric_limits<double>::infinity();
  std::complex<double> unit{1.0, 0.0};
};

LogCoord eval_coord_log(const PlanePolynomial& p, const ScaledPoint& q) {
  double L = q.is_origin() ? 0.0 : q.log_norm;
  double lx = std::abs(q.dx) > 0.0 ? std::log(std::abs(q.dx))
                                   : -std::numeric_limits<double>::infinity();
  double ly = std::abs(q.dy) > 0.0 ? std::log(std::abs(q.dy))
                                   : -std::numeric_limits<double>::infinity();
  double ax = std::arg(q.dx), ay = std::arg(q.dy);
  const bool origin = q.is_origin();

  double m_best = -std::numeric_limits<double>::infinity();
  struct Term {
    double lm;
    double phase;
  };
  std::vector<Term> live;
  live.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) {
    int i = e.first, j = e.second;
    if (origin && (i > 0 || j > 0)) continue;
    if (i > 0 && !(std::abs(q.dx) > 0.0)) continue;
    if (j > 0 && !(std::abs(q.dy) > 0.0)) continue;
    double lm = c.log_abs() + (i + j) * L;
    if (i > 0) lm += i * lx;
    if (j > 0) lm += j * ly;
    double ph = c.arg() + i * ax + j * ay;
    live.push_back({lm, ph});
    m_best = std::max(m_best, lm);
  }
  LogCoord out;
  if (live.empty() || m_best == -std::numeric_limits<double>::infinity()) return out;
  std::complex<double> sum = 0.0;
  for (const auto& t : live) sum += std::polar(std::exp(t.lm - m_best), t.phase);
  double s = std::abs(sum);
  if (s < 1e-10 * std::max<double>(1.0, static_cast<double>(live.size()))) {
    // Catastrophic cancellation at scale: unusable in floating point.
    throw error(errc::precision_loss, "cancellation during scaled evaluation");
  }
  out.log_mag = m_best + std::log(s);
  out.unit = sum / s;
  return out;
}

}  // namespace

ScaledPoint eval_scaled(const PlaneAutomorphism& f, const ScaledPoint& q) {
  // Direct complex evaluation whenever every intermediate stays in range.
  double L = q.is_origin() ? -std::numeric_limits<double>::infinity() : q.log_norm;
  double head = std::log1p(std::max(f.first().coeff_mag_sum(), f.second().coeff_mag_sum()));
  bool direct = q.is_origin() || L <= 0.0 ||
                (L <= 690.0 && L * f.degree() + head <= 690.0);
  if (direct) {
    auto [x, y] = point_value(q);
    return make_scaled(f.first().eval(x, y), f.second().eval(x, y));
  }
  LogCoord c1 = eval_coord_log(f.first(), q);
  LogCoord c2 = eval_coord_log(f.second(), q);
  double Lo = std::max(c1.log_mag, c2.log_mag);
  ScaledPoint out;
  if (Lo == -std::numeric_limits<double>::infinity()) return out;  // origin
  out.log_norm = Lo;
  out.dx = c1.log_mag == -std::numeric_limits<double>::infinity()
               ? std::complex<double>(0.0)
               : c1.unit * std::exp(c1.log_mag - Lo);
  out.dy = c2.log_mag == -std::numeric_limits<double>::infinity()
               ? std::complex<double>(0.0)
               : c2.unit * std::exp(c2.log_mag - Lo);
  out.bounded = out.log_norm <= 700.0;
  return out;
}

}  // namespace greenwalk
