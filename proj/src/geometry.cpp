#include "diskalg/geometry.hpp"

#include "diskalg/condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace diskalg {

void GeneratorSpec::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("radius must be positive");
  if (!F.is_zero()) {
    if (!F.is_odd()) throw std::invalid_argument("F must be odd");
    if (F.min_degree() < 3)
      throw std::invalid_argument("F must vanish to order 3 at the origin");
  }
}

Complex GeneratorSpec::h_at(Complex z) const {
  Complex s = h(z);
  if (h_symbol) s += (*h_symbol)(z);
  return s;
}

Complex GeneratorSpec::w(Complex z) const {
  if (direct_v)
    throw std::logic_error("w(z) is undefined for a direct second generator");
  return std::conj(z) + f(z) + g_at(z) + h_at(z);
}

Complex GeneratorSpec::v(Complex z) const {
  if (direct_v) return (*direct_v)(z);
  const Complex wz = w(z);
  return wz * wz;
}

std::vector<Complex> sample_disk(double r, int n_r, int n_theta) {
  if (n_r < 1 || n_theta < 1)
    throw std::invalid_argument("sample_disk needs n_r, n_theta >= 1");
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(n_r) * n_theta + 1);
  pts.emplace_back(0.0, 0.0);
  for (int j = 1; j <= n_r; ++j) {
    const double rho = r * j / n_r;
    for (int k = 0; k < n_theta; ++k)
      pts.push_back(std::polar(rho, 2.0 * std::numbers::pi * k / n_theta));
  }
  return pts;
}

FourDisks four_disks(const GeneratorSpec& spec,
                     std::span<const Complex> points) {
  FourDisks d;
  for (const Complex z : points) {
    const Complex wz = spec.w(z);
    d.D1.emplace_back(z, wz);
    d.D2.emplace_back(-z, -wz);
    d.D3.emplace_back(-z, wz);
    d.D4.emplace_back(z, -wz);
  }
  return d;
}

int separation_exponent(const GeneratorSpec& spec) {
  if (spec.direct_v) {
    const MixedPoly odd = spec.direct_v->odd_part();
    return odd.is_zero() ? 1 : odd.min_degree();
  }
  // w^2(z) - w^2(-z) = 4 w_odd(z) w_even(z) and w_odd starts at zbar.
  std::optional<int> even_deg;
  auto consider = [&](int d) { even_deg = even_deg ? std::min(*even_deg, d) : d; };
  if (spec.g && !spec.g->is_zero() && spec.g->degree() % 2 == 0)
    consider(spec.g->degree());
  if (spec.h_symbol && !spec.h_symbol->is_zero() &&
      spec.h_symbol->degree() % 2 == 0)
    consider(spec.h_symbol->degree());
  const MixedPoly he = spec.h.even_part();
  if (!he.is_zero()) consider(he.min_degree());
  return 1 + even_deg.value_or(1);
}

SeparationReport separation_check(const GeneratorSpec& spec,
                                  std::span<const Complex> points, double tol) {
  SeparationReport rep;
  rep.kappa = separation_exponent(spec);
  rep.min_normalized_gap = std::numeric_limits<double>::infinity();
  for (const Complex z : points) {
    if (z == Complex{}) continue;
    const double gap = std::abs(spec.v(z) - spec.v(-z)) /
                       std::pow(std::abs(z), rep.kappa);
    if (gap < rep.min_normalized_gap) {
      rep.min_normalized_gap = gap;
      rep.worst_z = z;
    }
    if (!(gap >= tol)) {
      rep.passed = false;
      rep.violations.push_back(z);
    }
  }
  return rep;
}

PointPair apply_G(const BiPoly& F, Complex w1, Complex w2) {
  return {w1, w2 + F(w1, w2)};
}

double biholomorphy_radius(const BiPoly& F) {
  if (!F.depends_on_zeta2()) return std::numeric_limits<double>::infinity();
  auto bound = [&](double rho) {
    double s = 0.0;
    for (const auto& [e, c] : F.terms())
      if (e.second > 0)
        s += e.second * std::abs(c) * std::pow(rho, e.first + e.second - 1);
    return s;
  };
  if (bound(0.0) > 0.5) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (bound(hi) <= 0.5) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) <= 0.5 ? lo : hi) = mid;
  }
  return lo;
}

InverseResult invert_G(const BiPoly& F, Complex z1, Complex z2, double tol,
                       int max_iter) {
  if (!F.depends_on_zeta2()) return {z2 - F(z1, 0.0), 0};
  const double rho = biholomorphy_radius(F);
  if (std::hypot(std::abs(z1), std::abs(z2)) > rho)
    throw std::domain_error("point outside biholomorphy region");
  const BiPoly dF = d_zeta2(F);
  Complex w = z2;
  for (int it = 0; it <= max_iter; ++it) {
    const Complex phi = w + F(z1, w) - z2;
    if (std::abs(phi) <= tol) return {w, it};
    if (it == max_iter) break;
    const Complex step = phi / (1.0 + dF(z1, w));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              std::abs(w)) {
      if (std::abs(w + F(z1, w) - z2) <= tol) return {w, it + 1};
      break;
    }
  }
  throw std::domain_error("point outside biholomorphy region: Newton did not converge");
}

StraightenedSheets straighten(const GeneratorSpec& spec,
                              std::span<const Complex> points, double tol,
                              int max_iter) {
  if (spec.direct_v || !spec.g)
    throw std::invalid_argument("straightening needs the zbar + f + g + h form");
  StraightenedSheets s;
  for (const Complex z : points) {
    if (z == Complex{}) {
      s.E1.emplace_back(Complex{}, Complex{});
      s.E2.emplace_back(Complex{}, Complex{});
      s.R1.emplace_back();
      s.R2.emplace_back();
      continue;
    }
    const Complex gz = spec.g_at(z);
    const Complex q1 = invert_G(spec.F, z, spec.w(z), tol, max_iter).w2;
    const Complex q2 = invert_G(spec.F, z, -spec.w(-z), tol, max_iter).w2;
    s.E1.emplace_back(z, q1);
    s.E2.emplace_back(z, q2);
    s.R1.push_back(q1 - std::conj(z) - gz);
    s.R2.push_back(q2 - std::conj(z) + gz);
  }
  return s;
}

std::vector<ResidualRow> residual_trace(const GeneratorSpec& spec,
                                        std::span<const double> radii,
                                        int n_theta, double tol) {
  if (spec.g && !symbol_zeros_on_circle(*spec.g).empty())
    throw std::domain_error("g has zeros on the unit circle: " + spec.g->to_string());
  std::vector<ResidualRow> rows;
  for (const double r : radii) {
    std::vector<Complex> circle;
    for (int k = 0; k < n_theta; ++k)
      circle.push_back(std::polar(r, 2.0 * std::numbers::pi * k / n_theta));
    const auto s = straighten(spec, circle, tol);
    ResidualRow row{r, 0.0, 0.0};
    for (std::size_t i = 0; i < circle.size(); ++i) {
      const double gabs = std::abs(spec.g_at(circle[i]));
      if (!(gabs > 0.0))
        throw std::domain_error("g vanishes at z = " + format_complex(circle[i]));
      const double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                               (std::abs(circle[i]) + std::abs(spec.w(circle[i])) + gabs);
      const double newton = spec.F.depends_on_zeta2() ? tol : 0.0;
      row.floor = std::max(row.floor, (noise + newton) / gabs);
      row.ratio1 = std::max(row.ratio1, std::abs(s.R1[i]) / gabs);
      row.ratio2 = std::max(row.ratio2, std::abs(s.R2[i]) / gabs);
    }
    rows.push_back(row);
  }
  return rows;
}

KallinReport kallin_probe(const BiPoly& p, std::span<const PointPair> set1,
                          std::span<const PointPair> set2, double phi,
                          double tol) {
  KallinReport rep;
  rep.min_margin1 = std::numeric_limits<double>::infinity();
  rep.min_margin2 = std::numeric_limits<double>::infinity();
  const int deg = p.min_degree();
  const Complex rot = std::polar(1.0, -phi);
  auto scan = [&](std::span<const PointPair> pts, int which, double& min_margin) {
    const double sign = which == 1 ? 1.0 : -1.0;
    for (const auto& pt : pts) {
      if (pt.first == Complex{} && pt.second == Complex{}) continue;
      const double scale =
          std::pow(std::hypot(std::abs(pt.first), std::abs(pt.second)), deg);
      const Complex val = p(pt.first, pt.second);
      if (std::abs(val) <= tol * scale) rep.zero_points.push_back(pt);
      const double normalized = sign * (rot * val).imag() / scale;
      min_margin = std::min(min_margin, normalized);
      if (!(normalized > tol)) rep.violations.push_back({which, pt, normalized});
    }
  };
  scan(set1, 1, rep.min_margin1);
  scan(set2, 2, rep.min_margin2);
  rep.passed = rep.violations.empty() && rep.zero_points.empty();
  return rep;
}

Sampler transform_generators(Sampler w, BiPoly F) {
  return [w = std::move(w), F = std::move(F)](Complex z) {
    const Complex wz = w(z);
    const Complex t = wz + F(z, wz);
    return t * t;
  };
}

BiPoly rewrite_even_perturbation(const BiPoly& G) {
  if (G.coeff(0, 0) != Complex{})
    throw std::invalid_argument("G must vanish at the origin");
  return 2.0 * G + G * G;
}

SmallnessReport check_h_smallness(const GeneratorSpec& spec, int n_theta) {
  SmallnessReport rep;
  if (!spec.g || spec.direct_v) return rep;
  for (const double r : {spec.radius, spec.radius / 2, spec.radius / 4}) {
    double ratio = 0.0;
    for (int k = 0; k < n_theta; ++k) {
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * k / n_theta);
      double denom = std::abs(spec.g_at(z));
      if (spec.h_class == SmallnessClass::LittleOofZ2G) denom *= std::norm(z);
      const double num = std::abs(spec.h_at(z));
      if (num == 0.0) continue;
      ratio = denom > 0.0 ? std::max(ratio, num / denom)
                          : std::numeric_limits<double>::infinity();
    }
    rep.rows.push_back({r, ratio});
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double prev = rep.rows[i - 1].ratio;
    const double cur = rep.rows[i].ratio;
    if (!(cur < prev || (prev == 0.0 && cur == 0.0))) rep.decreasing = false;
  }
  return rep;
}

}  // namespace diskalg
