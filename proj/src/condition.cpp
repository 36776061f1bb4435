#include "diskalg/condition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace diskalg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int half_degree(const HomogeneousSymbol& g) {
  if (g.degree() % 2 != 0)
    throw std::invalid_argument(
        "symbol degree must be even: expected g = sum a_k zbar^k z^(2m-k)");
  return g.degree() / 2;
}

Complex pivot_coeff(const HomogeneousSymbol& g, int l) {
  if (l > half_degree(g))
    throw std::invalid_argument("pivot index l must satisfy l <= m");
  Complex al = g.coeff(l);
  if (al == Complex{}) throw std::invalid_argument("pivot coefficient vanishes");
  return al;
}

// Angle 2 pi (n j mod M) / M, reduced before scaling to keep it accurate.
double sample_angle(long long n, long long j, long long M) {
  long long r = (n * j) % M;
  if (r < 0) r += M;
  return kTwoPi * static_cast<double>(r) / static_cast<double>(M);
}

void fill_A(const HomogeneousSymbol& g, int l, CoefficientVerdict& v) {
  const double al = std::abs(g.coeff(l));
  v.pivot = l;
  v.margin_A = al - (g.coeff_l1() - al);
  v.passes_A = v.margin_A > 0.0;
}

std::vector<Complex> derived_sequence(const HomogeneousSymbol& g, int l) {
  const Complex al = g.coeff(l);
  const int lo = g.terms().begin()->first;
  const int hi = g.terms().rbegin()->first;
  const int nmax = std::max({hi - l, l - lo, 0});
  std::vector<Complex> c(static_cast<std::size_t>(nmax));
  for (int n = 1; n <= nmax; ++n)
    c[n - 1] = g.coeff(l + n) / al + std::conj(g.coeff(l - n)) / std::conj(al);
  return c;
}

void fill_B(const HomogeneousSymbol& g, int l, CoefficientVerdict& v) {
  v.c = derived_sequence(g, l);
  double sum = 0.0;
  for (const auto& cn : v.c) sum += std::abs(cn);
  v.margin_B = 1.0 - sum;
  v.passes_B = v.margin_B > 0.0;
}

}  // namespace

std::string CoefficientVerdict::strongest() const {
  if (passes_A) return "A";
  if (passes_B) return "B";
  if (passes_C) return "C";
  return "none";
}

CoefficientVerdict check_condition_A(const HomogeneousSymbol& g) {
  const int m = half_degree(g);
  CoefficientVerdict best;
  best.margin_A = -g.coeff_l1();
  for (const auto& [k, a] : g.terms()) {
    if (k > m) break;
    CoefficientVerdict v;
    fill_A(g, k, v);
    if (!best.pivot || v.margin_A > best.margin_A) best = v;
  }
  return best;
}

CoefficientVerdict check_condition_B(const HomogeneousSymbol& g, int l) {
  pivot_coeff(g, l);
  CoefficientVerdict v;
  fill_A(g, l, v);
  fill_B(g, l, v);
  return v;
}

CoefficientVerdict check_condition_C(const HomogeneousSymbol& g, int l,
                                     int samples) {
  pivot_coeff(g, l);
  if (samples < 64) throw std::invalid_argument("condition C needs M >= 64");
  CoefficientVerdict v;
  fill_A(g, l, v);
  fill_B(g, l, v);

  double sampled_min = std::numeric_limits<double>::infinity();
  double slope = 0.0;
  for (std::size_t n = 0; n < v.c.size(); ++n)
    slope += static_cast<double>(n + 1) * std::abs(v.c[n]);
  for (int j = 0; j < samples; ++j) {
    double re = 1.0;
    for (std::size_t n = 0; n < v.c.size(); ++n) {
      const double phi = sample_angle(static_cast<long long>(n + 1), j, samples);
      re += (v.c[n] * std::polar(1.0, phi)).real();
    }
    sampled_min = std::min(sampled_min, re);
  }
  // Every point of the circle is within pi/M of a sample. 1 - sum|c_n| is a
  // second valid lower bound; keeping the larger one makes B imply C.
  const double lipschitz = sampled_min - std::numbers::pi / samples * slope;
  v.margin_C = std::max(lipschitz, v.margin_B);
  v.passes_C = sampled_min > 0.0 && v.margin_C > 0.0;
  return v;
}

CoefficientVerdict classify(const HomogeneousSymbol& g, int samples) {
  const int m = half_degree(g);
  auto rank = [](const CoefficientVerdict& v) {
    if (v.passes_A) return std::make_tuple(3, v.margin_A);
    if (v.passes_B) return std::make_tuple(2, v.margin_B);
    if (v.passes_C) return std::make_tuple(1, v.margin_C);
    return std::make_tuple(0, v.margin_C);
  };
  std::optional<CoefficientVerdict> best;
  for (const auto& [k, a] : g.terms()) {
    if (k > m) break;
    CoefficientVerdict v = check_condition_C(g, k, samples);
    if (!best || rank(v) > rank(*best)) best = std::move(v);
  }
  if (!best) {
    CoefficientVerdict none;
    none.margin_A = -g.coeff_l1();
    return none;
  }
  return *best;
}

Certificate build_certificate(const HomogeneousSymbol& g, int l) {
  const Complex al = pivot_coeff(g, l);
  const int m = g.degree() / 2;
  Certificate cert;
  cert.pivot = l;
  cert.s_degree = 2 * m - 2 * l + 1;
  cert.alpha = Complex(0.0, 1.0) * std::abs(al) / al;
  cert.p = BiPoly{{cert.s_degree, 0, std::conj(cert.alpha)},
                  {0, cert.s_degree, cert.alpha}};
  return cert;
}

MarginTrace margin_trace(const BiPoly& p, const HomogeneousSymbol& g,
                         int samples) {
  if (!p.is_homogeneous() || p.max_degree() % 2 == 0)
    throw std::invalid_argument("margin trace needs an odd homogeneous p");
  if (samples < 1) throw std::invalid_argument("margin trace needs M >= 1");
  const BiPoly dp = d_zeta2(p);

  // On the circle dp(e^{it}, e^{-it}) g(e^{it}) = sum_f C_f e^{ift}.
  std::map<int, Complex> spectrum;
  for (const auto& [e, b] : dp.terms())
    for (const auto& [k, a] : g.terms())
      spectrum[e.first - e.second + g.degree() - 2 * k] += b * a;
  MarginTrace t;
  for (const auto& [f, coef] : spectrum)
    t.lipschitz_bound += std::abs(f) * std::abs(coef);

  t.thetas.resize(samples);
  t.values.resize(samples);
  for (int j = 0; j < samples; ++j) {
    const double theta = sample_angle(1, j, samples);
    const Complex u = std::polar(1.0, theta);
    t.thetas[j] = theta;
    t.values[j] = (dp(u, std::conj(u)) * g(u)).imag();
  }
  return t;
}

PositivityResult check_strict_positivity(const MarginTrace& trace) {
  if (trace.values.empty()) return {false, 0.0};
  const double lo = *std::min_element(trace.values.begin(), trace.values.end());
  const double step = std::numbers::pi / static_cast<double>(trace.values.size());
  const double certified = lo - step * trace.lipschitz_bound;
  return {certified > 0.0, certified};
}

std::vector<Complex> standard_perturbations() {
  return {Complex(0.0, 0.0), Complex(0.1, 0.0), Complex(-0.1, 0.0),
          Complex(0.0, 0.1), Complex(0.0, -0.1)};
}

ConditionEvidence verify_polynomial_condition(
    const BiPoly& p, const std::function<Complex(Complex)>& g,
    std::span<const double> radii, int samples,
    std::span<const Complex> perturbations,
    std::span<const double> angle_offsets, std::size_t max_violations,
    int perturbation_order) {
  if (samples < 1) throw std::invalid_argument("verify needs M >= 1");
  if (!angle_offsets.empty() && angle_offsets.size() != radii.size())
    throw std::invalid_argument("one angle offset per radius expected");
  ConditionEvidence ev;
  const BiPoly q = odd_part(p);
  ev.reduced_to_odd_part = !(q == p);

  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
    const double offset = angle_offsets.empty() ? 0.0 : angle_offsets[ri];
    RadiusMargin rm{r, std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(), true};
    for (int j = 0; j < samples; ++j) {
      const Complex z = std::polar(r, offset + sample_angle(1, j, samples));
      if (z == Complex{}) continue;
      const Complex gz = g(z);
      for (const Complex c : perturbations) {
        const Complex R = c * ipow(z, perturbation_order) * gz;
        const double plus = q(z, std::conj(z) + gz + R).imag();
        const double minus = q(z, std::conj(z) - gz + R).imag();
        rm.min_plus = std::min(rm.min_plus, plus);
        rm.min_minus = std::min(rm.min_minus, -minus);
        if (!(plus > 0.0)) {
          rm.ok = false;
          if (ev.violations.size() < max_violations)
            ev.violations.push_back({z, c, +1, plus});
        }
        if (!(minus < 0.0)) {
          rm.ok = false;
          if (ev.violations.size() < max_violations)
            ev.violations.push_back({z, c, -1, minus});
        }
      }
    }
    if (rm.ok) ev.safe_radius = std::max(ev.safe_radius, r);
    ev.per_radius.push_back(rm);
  }
  return ev;
}

namespace {

std::vector<AngleInterval> runs_to_intervals(const std::vector<bool>& in,
                                             const std::vector<double>& th) {
  const std::size_t n = in.size();
  std::vector<AngleInterval> out;
  if (n == 0) return out;
  if (std::all_of(in.begin(), in.end(), [](bool b) { return b; }))
    return {{0.0, kTwoPi}};
  // Start scanning just after a sample outside the set so runs never wrap.
  std::size_t start = 0;
  while (in[start]) ++start;
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t i = (start + step) % n;
    if (!in[i]) continue;
    std::size_t last = i;
    while (in[(last + 1) % n]) {
      last = (last + 1) % n;
      ++step;
    }
    out.push_back({th[i], th[last]});
  }
  return out;
}

}  // namespace

CombineResult combine_certificates(const MarginTrace& f0,
                                   const MarginTrace& f1, double zero_tol,
                                   double cap) {
  const auto& a = f0.values;
  const auto& b = f1.values;
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("traces must be non-empty and equally sampled");
  if (!(cap > 0.0)) throw std::invalid_argument("cap must be positive");
  const std::size_t n = a.size();
  for (double v : a)
    if (v < -zero_tol) throw std::domain_error("first margin not nonnegative");

  std::vector<bool> in_zero_set(n);
  double min_f1_on_N = std::numeric_limits<double>::infinity();
  bool N_empty = true;
  for (std::size_t i = 0; i < n; ++i) {
    in_zero_set[i] = a[i] <= zero_tol;
    if (in_zero_set[i]) {
      N_empty = false;
      min_f1_on_N = std::min(min_f1_on_N, b[i]);
    }
  }

  CombineResult res;
  const double f1_sup = std::abs(*std::max_element(
      b.begin(), b.end(),
      [](double x, double y) { return std::abs(x) < std::abs(y); }));

  if (N_empty) {
    // f0 is already strictly positive; take the largest lambda <= cap that
    // keeps f0 + lambda (f1 - delta) >= 0 at every sample.
    res.strict_regime = true;
    res.delta = *std::min_element(a.begin(), a.end());
    res.epsilon = res.delta;
    res.lambda0 = cap;
    for (std::size_t i = 0; i < n; ++i)
      if (b[i] < res.delta)
        res.lambda0 = std::min(res.lambda0, a[i] / (res.delta - b[i]));
  } else {
    if (!(min_f1_on_N > 0.0))
      throw std::domain_error(
          "second certificate not positive on the zero set");
    res.delta = 0.5 * min_f1_on_N;

    // Grow U = {f0 < tau} over the sampled thresholds while min_U f1 >= delta.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x] < a[y]; });
    std::vector<bool> in_U(n, false);
    std::size_t pos = 0;
    while (pos < n && a[order[pos]] <= zero_tol) in_U[order[pos++]] = true;
    while (pos < n) {
      // Admit every sample tied at the next threshold together.
      std::size_t end = pos;
      bool ok = true;
      while (end < n && a[order[end]] == a[order[pos]]) {
        if (b[order[end]] < res.delta) ok = false;
        ++end;
      }
      if (!ok) break;
      for (; pos < end; ++pos) in_U[order[pos]] = true;
    }
    res.epsilon = pos < n ? a[order[pos]]
                          : std::numeric_limits<double>::infinity();
    res.U = runs_to_intervals(in_U, f0.thetas);

    res.lambda0 = cap;
    if (std::isfinite(res.epsilon)) {
      if (f1_sup > 0.0)
        res.lambda0 = std::min(res.lambda0, res.epsilon / 2.0 / f1_sup);
      res.lambda0 = std::min(res.lambda0, res.epsilon / (2.0 * res.delta));
    }
  }

  res.verified_floor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    res.verified_floor = std::min(
        res.verified_floor, a[i] + res.lambda0 * b[i] - res.lambda0 * res.delta);
  if (res.verified_floor < -1e-12)
    throw std::domain_error("combined margin floor is negative");
  return res;
}

HomogeneousSymbol symbol_from_certificate(const BiPoly& p) {
  const auto sym = is_complex_symmetric(p);
  if (!sym.symmetric)
    throw std::invalid_argument("certificate is not complex-symmetric");
  if (p.max_degree() < 3)
    throw std::invalid_argument(
        "certificate degree must be at least 3 (s=1 excluded)");
  // conj(b z^j zbar^k) = conj(b) zbar^j z^k
  std::vector<SymbolTerm> terms;
  const BiPoly dp = d_zeta2(p);
  for (const auto& [e, b] : dp.terms())
    terms.push_back({e.first, Complex(0.0, 1.0) * std::conj(b)});
  return HomogeneousSymbol(p.max_degree() - 1, terms);
}

std::vector<double> symbol_zeros_on_circle(const HomogeneousSymbol& g,
                                           int samples, double tol) {
  if (samples < 3) throw std::invalid_argument("need at least 3 samples");
  const double scale = g.coeff_l1();
  if (scale == 0.0) return {};
  auto mag = [&](double t) { return std::abs(g(std::polar(1.0, t))); };
  const double h = kTwoPi / samples;
  std::vector<double> vals(samples);
  for (int j = 0; j < samples; ++j) vals[j] = mag(j * h);

  std::vector<double> zeros;
  for (int j = 0; j < samples; ++j) {
    const double prev = vals[(j + samples - 1) % samples];
    const double next = vals[(j + 1) % samples];
    if (!(vals[j] <= prev && vals[j] < next)) continue;
    double lo = (j - 1) * h;
    double hi = (j + 1) * h;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
      const double x1 = hi - gr * (hi - lo);
      const double x2 = lo + gr * (hi - lo);
      if (mag(x1) < mag(x2))
        hi = x2;
      else
        lo = x1;
    }
    double t = 0.5 * (lo + hi);
    if (std::min(mag(t), vals[j]) >= tol * scale) continue;
    if (vals[j] <= mag(t)) t = j * h;
    t = std::fmod(t + kTwoPi, kTwoPi);
    zeros.push_back(t);
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

}  // namespace diskalg
