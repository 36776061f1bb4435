#pragma once

// Sufficient coefficient conditions for the polynomial condition, the
// two-term certificate polynomial, margin traces on the unit circle, sampled
// sign verification and the combination of two certificates.

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diskalg/symbolic.hpp"

namespace diskalg {

/// Outcome of the coefficient tests at one pivot index l <= m, for a symbol
/// g = sum a_k zbar^k z^(2m-k). The three tests are successively weaker:
///   A: |a_l| > sum_{n != l} |a_n|
///   B: sum_{n>=1} |c_n| < 1,  c_n = a_{l+n}/a_l + conj(a_{l-n})/conj(a_l)
///   C: Re(1 + sum c_n w^n) > 0 on |w| = 1
/// Fields of tests that were not run stay false / 0.
struct CoefficientVerdict {
  std::optional<int> pivot;
  bool passes_A = false;
  bool passes_B = false;
  bool passes_C = false;
  double margin_A = 0.0;
  double margin_B = 0.0;
  double margin_C = 0.0;
  /// c_1, c_2, ... (index 0 holds c_1).
  std::vector<Complex> c;

  bool passes_any() const { return passes_A || passes_B || passes_C; }
  /// "A", "B", "C" or "none".
  std::string strongest() const;
};

struct Certificate {
  BiPoly p;
  int s_degree = 0;
  Complex alpha;
  int pivot = 0;
};

/// f(theta) = Im(dp/dzeta2(e^{i theta}, e^{-i theta}) * g(e^{i theta}))
/// sampled at uniform angles.
struct MarginTrace {
  std::vector<double> thetas;
  std::vector<double> values;
  /// Bound on |f'(theta)|, exact for the finite trigonometric polynomial.
  double lipschitz_bound = 0.0;
};

struct AngleInterval {
  double begin;
  double end;
};

struct CombineResult {
  double delta = 0.0;
  std::vector<AngleInterval> U;
  /// +infinity when the complement of U has no samples.
  double epsilon = std::numeric_limits<double>::infinity();
  double lambda0 = 0.0;
  double verified_floor = 0.0;
  bool strict_regime = false;
};

struct PositivityResult {
  bool positive;
  double certified_min;
};

/// Pivot candidates are the support indices l <= m; the one with the largest
/// margin_A wins, ties going to the smaller l.
CoefficientVerdict check_condition_A(const HomogeneousSymbol& g);
CoefficientVerdict check_condition_B(const HomogeneousSymbol& g, int l);
CoefficientVerdict check_condition_C(const HomogeneousSymbol& g, int l,
                                     int samples = 4096);

/// Runs A, B and C at every candidate pivot and keeps the pivot passing the
/// strongest test with the largest margin for that test.
CoefficientVerdict classify(const HomogeneousSymbol& g, int samples = 4096);

/// p = conj(alpha) zeta1^(2m-2l+1) + alpha zeta2^(2m-2l+1),
/// alpha = i |a_l| / a_l.
Certificate build_certificate(const HomogeneousSymbol& g, int l);

MarginTrace margin_trace(const BiPoly& p, const HomogeneousSymbol& g,
                         int samples);

/// certified_min = sample minimum - (pi / M) * lipschitz_bound.
PositivityResult check_strict_positivity(const MarginTrace& trace);

struct SignViolation {
  Complex z;
  Complex perturbation;
  int branch;  // +1 for zbar + g + R, -1 for zbar - g + R
  double value;
};

struct RadiusMargin {
  double radius;
  double min_plus;   // min of Im p(z, zbar + g + R)
  double min_minus;  // min of -Im p(z, zbar - g + R)
  bool ok;
};

struct ConditionEvidence {
  bool reduced_to_odd_part = false;
  std::vector<RadiusMargin> per_radius;
  std::vector<SignViolation> violations;
  /// Largest sampled radius at which every check passed, 0 if none.
  double safe_radius = 0.0;
  bool ok() const { return violations.empty(); }
};

/// The standard perturbation coefficients c in R(z) = c z g(z).
std::vector<Complex> standard_perturbations();

/// Samples both strict inequalities of the polynomial condition for every
/// radius, every angle and every perturbation R(z) = c z^order g(z). Order 1
/// probes R = o(g); order 3 probes R = o(z^2 g). Even parts of p are dropped
/// first. At most `max_violations` violations are recorded. When
/// angle_offsets is non-empty it holds one offset per radius.
ConditionEvidence verify_polynomial_condition(
    const BiPoly& p, const std::function<Complex(Complex)>& g,
    std::span<const double> radii, int samples,
    std::span<const Complex> perturbations,
    std::span<const double> angle_offsets = {},
    std::size_t max_violations = 64, int perturbation_order = 1);

/// Combines a nonnegative first margin f0 with a second margin f1 that is
/// positive on the zero set N of f0 into f0 + lambda f1 >= lambda delta.
/// Throws std::domain_error when a hypothesis fails.
CombineResult combine_certificates(const MarginTrace& f0,
                                   const MarginTrace& f1,
                                   double zero_tol = 1e-9, double cap = 1.0);

/// g(z) = i conj(dp/dzeta2(z, zbar)) for a complex-symmetric p of odd
/// degree at least 3.
HomogeneousSymbol symbol_from_certificate(const BiPoly& p);

/// Angles in [0, 2pi) where g vanishes on the unit circle (local minima of
/// |g| below tol * sum|a_k|, refined by golden-section search).
std::vector<double> symbol_zeros_on_circle(const HomogeneousSymbol& g,
                                           int samples = 4096,
                                           double tol = 1e-8);

}  // namespace diskalg
