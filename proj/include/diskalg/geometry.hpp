#pragma once

// Generator specifications, the four preimage disks under the square map,
// separation of points, the map G(w1, w2) = (w1, w2 + F(w1, w2)) with its
// Newton inverse, residual extraction and half-plane probes.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diskalg/symbolic.hpp"

namespace diskalg {

/// Declared asymptotic class of the perturbation h.
enum class SmallnessClass { LittleOofG, LittleOofZ2G };

/// Disk radius and the pieces of w(z) = zbar + F(z, zbar) + g(z) + h(z), or a
/// direct second generator v(z) that replaces w(z)^2.
struct GeneratorSpec {
  double radius = 0.1;
  BiPoly F;
  std::optional<HomogeneousSymbol> g;
  MixedPoly h;
  std::optional<HomogeneousSymbol> h_symbol;
  SmallnessClass h_class = SmallnessClass::LittleOofG;
  std::optional<MixedPoly> direct_v;

  /// Throws std::invalid_argument unless F is odd with lowest degree >= 3
  /// and the radius is positive.
  void validate() const;

  bool has_direct() const { return direct_v.has_value(); }
  Complex f(Complex z) const { return F(z, std::conj(z)); }
  Complex g_at(Complex z) const { return g ? (*g)(z) : Complex{}; }
  Complex h_at(Complex z) const;
  /// zbar + f + g + h; throws for a direct-only spec.
  Complex w(Complex z) const;
  /// The second generator: w(z)^2 or the direct v(z).
  Complex v(Complex z) const;
};

using PointPair = std::pair<Complex, Complex>;

/// Origin followed by (j / n_r) r e^{2 pi i k / n_theta}, j = 1..n_r,
/// k = 0..n_theta-1, radius-major.
std::vector<Complex> sample_disk(double r, int n_r, int n_theta);

struct FourDisks {
  std::vector<PointPair> D1, D2, D3, D4;
};

/// D1 = (z, w), D2 = (-z, -w), D3 = (-z, w), D4 = (z, -w).
FourDisks four_disks(const GeneratorSpec& spec, std::span<const Complex> points);

struct SeparationReport {
  bool passed = true;
  int kappa = 0;
  double min_normalized_gap = 0.0;
  Complex worst_z;
  std::vector<Complex> violations;
};

/// Normalization exponent for |v(z) - v(-z)|.
int separation_exponent(const GeneratorSpec& spec);

SeparationReport separation_check(const GeneratorSpec& spec,
                                  std::span<const Complex> points, double tol);

PointPair apply_G(const BiPoly& F, Complex w1, Complex w2);

/// Largest rho with sum k |c_jk| rho^(j+k-1) <= 1/2, so that
/// |dF/dzeta2| <= 1/2 on the ball of radius rho. +infinity when F does not
/// depend on zeta2.
double biholomorphy_radius(const BiPoly& F);

struct InverseResult {
  Complex w2;
  int iterations;
};

/// Solves w2 + F(z1, w2) = z2 by Newton's method from w2 = z2. F without
/// zeta2 dependence is inverted exactly. Throws std::domain_error when the
/// point lies outside the biholomorphy radius or Newton fails to converge.
InverseResult invert_G(const BiPoly& F, Complex z1, Complex z2,
                       double tol = 1e-13, int max_iter = 50);

struct ResidualRow {
  double radius;
  double ratio1;  // max |R1| / |g|
  double ratio2;  // max |R2| / |g|
  /// Ratio attainable by rounding and the Newton tolerance alone.
  double floor = 0.0;
};

struct StraightenedSheets {
  std::vector<PointPair> E1;
  std::vector<PointPair> E2;
  std::vector<Complex> R1;
  std::vector<Complex> R2;
};

/// Pulls D1 = (z, w(z)) and D2 = (z, -w(-z)) back through G. Points at
/// z = 0 map to the origin with zero residual.
StraightenedSheets straighten(const GeneratorSpec& spec,
                              std::span<const Complex> points,
                              double tol = 1e-13, int max_iter = 50);

/// For each radius, max |R_i| / |g| over n_theta points of the circle.
std::vector<ResidualRow> residual_trace(const GeneratorSpec& spec,
                                        std::span<const double> radii,
                                        int n_theta, double tol = 1e-13);

struct ProbeViolation {
  int set;  // 1 or 2
  PointPair point;
  double normalized_value;
};

struct KallinReport {
  bool passed = true;
  double min_margin1 = 0.0;  // min of  Im(e^{-i phi} p) / scale over set 1
  double min_margin2 = 0.0;  // min of -Im(e^{-i phi} p) / scale over set 2
  std::vector<ProbeViolation> violations;
  std::vector<PointPair> zero_points;
};

/// Set 1 must map into the rotated half-plane e^{i phi} {Im > 0} and set 2
/// into its mirror, strictly beyond tol * ||zeta||^(lowest degree of p).
/// Origin points are excluded; any other point with |p| <= tol * scale is
/// reported as a spurious zero.
KallinReport kallin_probe(const BiPoly& p, std::span<const PointPair> set1,
                          std::span<const PointPair> set2, double phi,
                          double tol);

using Sampler = std::function<Complex(Complex)>;

/// z -> (w(z) + F(z, w(z)))^2.
Sampler transform_generators(Sampler w, BiPoly F);

/// H = 2G + G^2, so that (w + w G)^2 = w^2 (1 + H). Requires G(0,0) = 0.
BiPoly rewrite_even_perturbation(const BiPoly& G);

struct SmallnessRow {
  double radius;
  double ratio;
};

/// max |h| / |g| (or |h| / |z^2 g|) on three circles of radius r, r/2, r/4.
/// `decreasing` when the ratio shrinks as the radius does.
struct SmallnessReport {
  std::vector<SmallnessRow> rows;
  bool decreasing = true;
};
SmallnessReport check_h_smallness(const GeneratorSpec& spec, int n_theta = 64);

}  // namespace diskalg
