#pragma once

// Sparse analytic polynomials in (zeta1, zeta2), homogeneous z/zbar symbols
// and finite mixed polynomials in z and zbar.

#include <complex>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace diskalg {

using Complex = std::complex<double>;

/// Exponent pair (j, k) of the monomial zeta1^j * zeta2^k.
using Exponent = std::pair<int, int>;

struct BiTerm {
  int j;
  int k;
  Complex c;
};

/// Sparse bivariate analytic polynomial sum c_{j,k} zeta1^j zeta2^k.
/// Zero coefficients are never stored, so structural predicates are exact.
class BiPoly {
 public:
  BiPoly() = default;
  BiPoly(std::initializer_list<BiTerm> terms);
  explicit BiPoly(const std::vector<BiTerm>& terms);

  static BiPoly constant(Complex c);
  static BiPoly monomial(int j, int k, Complex c = 1.0);

  const std::map<Exponent, Complex>& terms() const { return terms_; }
  Complex coeff(int j, int k) const;
  bool is_zero() const { return terms_.empty(); }

  /// Lowest and highest total degree; both 0 for the zero polynomial.
  int min_degree() const;
  int max_degree() const;
  bool is_homogeneous() const;
  bool is_odd() const;
  bool depends_on_zeta2() const;

  Complex operator()(Complex zeta1, Complex zeta2) const;

  BiPoly operator-() const;
  BiPoly& operator+=(const BiPoly& other);
  BiPoly& operator-=(const BiPoly& other);
  BiPoly& operator*=(Complex s);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(BiPoly a, Complex s) { return a *= s; }
  friend BiPoly operator*(Complex s, BiPoly a) { return a *= s; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend bool operator==(const BiPoly& a, const BiPoly& b) = default;

  std::string to_string() const;

 private:
  void add_term(int j, int k, Complex c);

  std::map<Exponent, Complex> terms_;
};

Complex eval_bipoly(const BiPoly& p, Complex zeta1, Complex zeta2);

/// Groups terms by total degree; degrees strictly increasing.
std::vector<std::pair<int, BiPoly>> homogeneous_parts(const BiPoly& p);

/// Terms of odd total degree.
BiPoly odd_part(const BiPoly& p);

/// Formal partial derivative in zeta2.
BiPoly d_zeta2(const BiPoly& p);

struct SymmetryCheck {
  bool symmetric;
  double deviation;
};

/// For an odd homogeneous p = sum a_k zeta1^k zeta2^(d-k), tests
/// a_k == conj(a_(d-k)). Throws std::invalid_argument on other input.
SymmetryCheck is_complex_symmetric(const BiPoly& p);

/// The quotient (F(w1,w3) - F(w1,w2)) / (w3 - w2), replaced by
/// dF/dzeta2(w1, w2) when |w3 - w2| <= 1e-8 (1 + |w2|).
Complex difference_quotient(const BiPoly& F, Complex w1, Complex w2,
                            Complex w3);

struct SymbolTerm {
  int k;
  Complex a;
};

/// Homogeneous function g(z) = sum_k a_k zbar^k z^(d-k), k of any sign.
/// The degree d must be at least 2 so that g is C^1 and o(z) at the origin.
class HomogeneousSymbol {
 public:
  HomogeneousSymbol(int degree, std::initializer_list<SymbolTerm> terms);
  HomogeneousSymbol(int degree, const std::vector<SymbolTerm>& terms);

  int degree() const { return degree_; }
  const std::map<int, Complex>& terms() const { return terms_; }
  Complex coeff(int k) const;
  bool is_zero() const { return terms_.empty(); }
  /// Sum of |a_k|.
  double coeff_l1() const;

  Complex operator()(Complex z) const;

  std::string to_string() const;

 private:
  int degree_;
  std::map<int, Complex> terms_;
};

Complex eval_symbol(const HomogeneousSymbol& g, Complex z);

enum class Parity { None, Odd, Even };

struct MixedTerm {
  int p;
  int q;
  Complex c;
};

/// Finite sum c_{p,q} z^p zbar^q. A declared parity is validated term-wise.
class MixedPoly {
 public:
  MixedPoly() = default;
  MixedPoly(std::initializer_list<MixedTerm> terms, Parity parity = Parity::None);
  MixedPoly(const std::vector<MixedTerm>& terms, Parity parity = Parity::None);

  /// f(z) = F(z, zbar) as a mixed polynomial.
  static MixedPoly trace_of(const BiPoly& F);

  const std::map<Exponent, Complex>& terms() const { return terms_; }
  Parity parity() const { return parity_; }
  bool is_zero() const { return terms_.empty(); }
  int min_degree() const;

  /// Split into the parts of odd and even total degree.
  MixedPoly odd_part() const;
  MixedPoly even_part() const;

  Complex operator()(Complex z) const;

  std::string to_string() const;

 private:
  std::map<Exponent, Complex> terms_;
  Parity parity_ = Parity::None;
};

Complex eval_mixed(const MixedPoly& f, Complex z);

/// Integer power by repeated squaring; exact sign symmetry under negation.
Complex ipow(Complex z, int n);

std::string format_complex(Complex c);

}  // namespace diskalg
