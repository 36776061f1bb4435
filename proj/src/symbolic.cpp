#include "diskalg/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace diskalg {

namespace {

void require_finite(Complex c, const char* what) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw std::invalid_argument(std::string(what) + ": non-finite coefficient");
}

}  // namespace

Complex ipow(Complex z, int n) {
  if (n < 0) throw std::invalid_argument("ipow: negative exponent");
  Complex result = 1.0;
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

std::string format_complex(Complex c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  return buf;
}

// ---------------------------------------------------------------- BiPoly

BiPoly::BiPoly(std::initializer_list<BiTerm> terms) {
  for (const auto& t : terms) add_term(t.j, t.k, t.c);
}

BiPoly::BiPoly(const std::vector<BiTerm>& terms) {
  for (const auto& t : terms) add_term(t.j, t.k, t.c);
}

BiPoly BiPoly::constant(Complex c) { return BiPoly{{0, 0, c}}; }

BiPoly BiPoly::monomial(int j, int k, Complex c) { return BiPoly{{j, k, c}}; }

void BiPoly::add_term(int j, int k, Complex c) {
  if (j < 0 || k < 0) throw std::invalid_argument("BiPoly: negative exponent");
  require_finite(c, "BiPoly");
  auto [it, inserted] = terms_.try_emplace({j, k}, c);
  if (!inserted) it->second += c;
  if (it->second == Complex{}) terms_.erase(it);
}

Complex BiPoly::coeff(int j, int k) const {
  auto it = terms_.find({j, k});
  return it == terms_.end() ? Complex{} : it->second;
}

int BiPoly::min_degree() const {
  if (terms_.empty()) return 0;
  int d = terms_.begin()->first.first + terms_.begin()->first.second;
  for (const auto& [e, c] : terms_) d = std::min(d, e.first + e.second);
  return d;
}

int BiPoly::max_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

bool BiPoly::is_homogeneous() const {
  return !terms_.empty() && min_degree() == max_degree();
}

bool BiPoly::is_odd() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
    return (t.first.first + t.first.second) % 2 == 1;
  });
}

bool BiPoly::depends_on_zeta2() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.first.second > 0; });
}

Complex BiPoly::operator()(Complex zeta1, Complex zeta2) const {
  Complex sum{};
  for (const auto& [e, c] : terms_)
    sum += c * ipow(zeta1, e.first) * ipow(zeta2, e.second);
  return sum;
}

BiPoly BiPoly::operator-() const {
  BiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

BiPoly& BiPoly::operator+=(const BiPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e.first, e.second, c);
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e.first, e.second, -c);
  return *this;
}

BiPoly& BiPoly::operator*=(Complex s) {
  require_finite(s, "BiPoly scale");
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    if (it->second == Complex{})
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return r;
}

std::string BiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_complex(c);
    if (e.first > 0) os << "*z1^" << e.first;
    if (e.second > 0) os << "*z2^" << e.second;
  }
  return os.str();
}

Complex eval_bipoly(const BiPoly& p, Complex zeta1, Complex zeta2) {
  return p(zeta1, zeta2);
}

std::vector<std::pair<int, BiPoly>> homogeneous_parts(const BiPoly& p) {
  std::map<int, std::vector<BiTerm>> grouped;
  for (const auto& [e, c] : p.terms())
    grouped[e.first + e.second].push_back({e.first, e.second, c});
  std::vector<std::pair<int, BiPoly>> parts;
  for (const auto& [d, ts] : grouped) parts.emplace_back(d, BiPoly(ts));
  return parts;
}

BiPoly odd_part(const BiPoly& p) {
  std::vector<BiTerm> ts;
  for (const auto& [e, c] : p.terms())
    if ((e.first + e.second) % 2 == 1) ts.push_back({e.first, e.second, c});
  return BiPoly(ts);
}

BiPoly d_zeta2(const BiPoly& p) {
  std::vector<BiTerm> ts;
  for (const auto& [e, c] : p.terms())
    if (e.second > 0)
      ts.push_back({e.first, e.second - 1, c * static_cast<double>(e.second)});
  return BiPoly(ts);
}

SymmetryCheck is_complex_symmetric(const BiPoly& p) {
  if (!p.is_homogeneous() || p.max_degree() % 2 == 0)
    throw std::invalid_argument("not an odd homogeneous polynomial");
  const int d = p.max_degree();
  double deviation = 0.0;
  for (int k = 0; k <= d; ++k) {
    // a_k multiplies zeta1^k zeta2^(d-k).
    Complex ak = p.coeff(k, d - k);
    Complex mirror = p.coeff(d - k, k);
    deviation = std::max(deviation, std::abs(ak - std::conj(mirror)));
  }
  return {deviation == 0.0, deviation};
}

Complex difference_quotient(const BiPoly& F, Complex w1, Complex w2,
                            Complex w3) {
  if (std::abs(w3 - w2) <= 1e-8 * (1.0 + std::abs(w2)))
    return d_zeta2(F)(w1, w2);
  return (F(w1, w3) - F(w1, w2)) / (w3 - w2);
}

// ------------------------------------------------------ HomogeneousSymbol

HomogeneousSymbol::HomogeneousSymbol(int degree,
                                     std::initializer_list<SymbolTerm> terms)
    : HomogeneousSymbol(degree, std::vector<SymbolTerm>(terms)) {}

HomogeneousSymbol::HomogeneousSymbol(int degree,
                                     const std::vector<SymbolTerm>& terms)
    : degree_(degree) {
  if (degree < 2)
    throw std::invalid_argument(
        "HomogeneousSymbol: degree must be at least 2");
  for (const auto& t : terms) {
    require_finite(t.a, "HomogeneousSymbol");
    auto [it, inserted] = terms_.try_emplace(t.k, t.a);
    if (!inserted) it->second += t.a;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

Complex HomogeneousSymbol::coeff(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

double HomogeneousSymbol::coeff_l1() const {
  double s = 0.0;
  for (const auto& [k, a] : terms_) s += std::abs(a);
  return s;
}

Complex HomogeneousSymbol::operator()(Complex z) const {
  if (z == Complex{}) return {};
  const double r = std::abs(z);
  const Complex u = z / r;
  // zbar^k z^(d-k) = r^d u^(d-2k) on |u| = 1.
  Complex sum{};
  for (const auto& [k, a] : terms_) {
    const int n = degree_ - 2 * k;
    sum += a * (n >= 0 ? ipow(u, n) : ipow(std::conj(u), -n));
  }
  return std::pow(r, degree_) * sum;
}

std::string HomogeneousSymbol::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, a] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_complex(a) << "*zbar^" << k << "*z^" << (degree_ - k);
  }
  return os.str();
}

Complex eval_symbol(const HomogeneousSymbol& g, Complex z) { return g(z); }

// -------------------------------------------------------------- MixedPoly

MixedPoly::MixedPoly(std::initializer_list<MixedTerm> terms, Parity parity)
    : MixedPoly(std::vector<MixedTerm>(terms), parity) {}

MixedPoly::MixedPoly(const std::vector<MixedTerm>& terms, Parity parity)
    : parity_(parity) {
  for (const auto& t : terms) {
    if (t.p < 0 || t.q < 0)
      throw std::invalid_argument("MixedPoly: negative exponent");
    require_finite(t.c, "MixedPoly");
    auto [it, inserted] = terms_.try_emplace({t.p, t.q}, t.c);
    if (!inserted) it->second += t.c;
    if (it->second == Complex{}) terms_.erase(it);
  }
  for (const auto& [e, c] : terms_) {
    const bool odd = (e.first + e.second) % 2 == 1;
    if ((parity_ == Parity::Odd && !odd) || (parity_ == Parity::Even && odd))
      throw std::invalid_argument("MixedPoly: term z^" +
                                  std::to_string(e.first) + " zbar^" +
                                  std::to_string(e.second) +
                                  " violates the declared parity");
  }
}

MixedPoly MixedPoly::trace_of(const BiPoly& F) {
  std::vector<MixedTerm> ts;
  for (const auto& [e, c] : F.terms()) ts.push_back({e.first, e.second, c});
  return MixedPoly(ts, F.is_odd() && !F.is_zero() ? Parity::Odd : Parity::None);
}

int MixedPoly::min_degree() const {
  if (terms_.empty()) return 0;
  int d = terms_.begin()->first.first + terms_.begin()->first.second;
  for (const auto& [e, c] : terms_) d = std::min(d, e.first + e.second);
  return d;
}

MixedPoly MixedPoly::odd_part() const {
  std::vector<MixedTerm> ts;
  for (const auto& [e, c] : terms_)
    if ((e.first + e.second) % 2 == 1) ts.push_back({e.first, e.second, c});
  return MixedPoly(ts, Parity::Odd);
}

MixedPoly MixedPoly::even_part() const {
  std::vector<MixedTerm> ts;
  for (const auto& [e, c] : terms_)
    if ((e.first + e.second) % 2 == 0) ts.push_back({e.first, e.second, c});
  return MixedPoly(ts, Parity::Even);
}

Complex MixedPoly::operator()(Complex z) const {
  Complex sum{};
  const Complex zb = std::conj(z);
  for (const auto& [e, c] : terms_)
    sum += c * ipow(z, e.first) * ipow(zb, e.second);
  return sum;
}

std::string MixedPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_complex(c);
    if (e.first > 0) os << "*z^" << e.first;
    if (e.second > 0) os << "*zbar^" << e.second;
  }
  return os.str();
}

Complex eval_mixed(const MixedPoly& f, Complex z) { return f(z); }

}  // namespace diskalg
