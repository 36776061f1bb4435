#include "diskalg/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diskalg/geometry.hpp"

namespace diskalg {

namespace {

Eigen::MatrixXcd raw_monomials(const std::vector<std::pair<int, int>>& exps,
                               const Sampler& v,
                               std::span<const Complex> pts) {
  Eigen::MatrixXcd A(static_cast<Eigen::Index>(pts.size()),
                     static_cast<Eigen::Index>(exps.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Complex z2 = pts[i] * pts[i];
    const Complex vz = v(pts[i]);
    for (std::size_t c = 0; c < exps.size(); ++c)
      A(i, c) = ipow(z2, exps[c].first) * ipow(vz, exps[c].second);
  }
  return A;
}

Eigen::VectorXcd to_vector(std::span<const Complex> xs) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(i) = xs[i];
  return v;
}

}  // namespace

Eigen::MatrixXcd Basis::evaluate(std::span<const Complex> pts) const {
  Eigen::MatrixXcd A = raw_monomials(exponents, v, pts);
  for (std::size_t c = 0; c < scales.size(); ++c) A.col(c) *= scales[c];
  return A;
}

Basis build_basis(Sampler v, std::span<const Complex> points, int N) {
  if (N < 0) throw std::invalid_argument("degree budget must be >= 0");
  Basis b;
  b.degree = N;
  b.v = std::move(v);
  b.points.assign(points.begin(), points.end());
  for (int t = 0; t <= N; ++t)
    for (int j = t; j >= 0; --j) b.exponents.emplace_back(j, t - j);
  b.columns = raw_monomials(b.exponents, b.v, points);
  b.scales.resize(b.exponents.size());
  for (Eigen::Index c = 0; c < b.columns.cols(); ++c) {
    const double mx = b.columns.col(c).cwiseAbs().maxCoeff();
    b.scales[c] = mx > 0.0 ? 1.0 / mx : 1.0;
    b.columns.col(c) *= b.scales[c];
  }
  return b;
}

FitReport weighted_fit(const Basis& basis, std::span<const Complex> target,
                       std::span<const double> weights, double ridge) {
  const auto& A = basis.columns;
  if (static_cast<Eigen::Index>(target.size()) != A.rows() ||
      weights.size() != target.size())
    throw std::invalid_argument("target / weight length mismatch");
  if (A.rows() < A.cols())
    throw std::invalid_argument("fewer training samples than basis columns");
  const Eigen::VectorXcd b = to_vector(target);
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) w(i) = weights[i];

  Eigen::MatrixXcd normal = A.adjoint() * w.asDiagonal() * A;
  normal.diagonal().array() += ridge;
  const Eigen::VectorXcd rhs = A.adjoint() * (w.asDiagonal() * b);
  Eigen::LLT<Eigen::MatrixXcd> llt(normal);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "basis numerically rank-deficient; increase ridge or reduce N");
  const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal().real();
  if (!(diag.minCoeff() > 0.0) || !diag.allFinite())
    throw std::runtime_error(
        "basis numerically rank-deficient; increase ridge or reduce N");

  FitReport fit;
  fit.degree = basis.degree;
  fit.coefficients = llt.solve(rhs);
  fit.condition = std::pow(diag.maxCoeff() / diag.minCoeff(), 2);
  const Eigen::VectorXcd e = b - A * fit.coefficients;
  fit.train_l2 = e.norm();
  fit.train_sup = e.size() ? e.cwiseAbs().maxCoeff() : 0.0;
  fit.validation_sup = fit.train_sup;
  return fit;
}

FitReport least_squares_fit(const Basis& basis, std::span<const Complex> target,
                            double ridge) {
  const std::vector<double> ones(target.size(), 1.0);
  return weighted_fit(basis, target, ones, ridge);
}

double sup_residual(const Basis& basis, const FitReport& fit,
                    std::span<const Complex> points,
                    std::span<const Complex> target) {
  if (points.size() != target.size())
    throw std::invalid_argument("point / target length mismatch");
  if (points.empty()) return 0.0;
  const Eigen::VectorXcd e =
      to_vector(target) - basis.evaluate(points) * fit.coefficients;
  return e.cwiseAbs().maxCoeff();
}

FitReport lawson_refine(const Basis& basis, std::span<const Complex> target,
                        int iters, double ridge) {
  if (iters < 1) throw std::invalid_argument("lawson needs iters >= 1");
  const std::size_t n = target.size();
  std::vector<double> w(n, 1.0);
  FitReport best = least_squares_fit(basis, target, ridge);
  const Eigen::VectorXcd b = to_vector(target);
  for (int it = 0; it < iters; ++it) {
    FitReport fit;
    try {
      fit = weighted_fit(basis, target, w, ridge);
    } catch (const std::runtime_error&) {
      best.weight_collapse = true;
      break;
    }
    if (fit.train_sup < best.train_sup) best = fit;
    const Eigen::VectorXcd e = b - basis.columns * fit.coefficients;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::abs(e(static_cast<Eigen::Index>(i)));
      total += w[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      best.weight_collapse = true;
      break;
    }
    for (double& x : w) x *= static_cast<double>(n) / total;
  }
  return best;
}

Complex Target::operator()(Complex z) const {
  Complex s = poly(z);
  for (const auto& [c, alpha] : abs_powers) s += c * std::pow(std::abs(z), alpha);
  return s;
}

StudyResult convergence_study(const Sampler& v, double radius,
                              std::span<const Target> targets,
                              std::span<const int> degrees, GridSpec train,
                              double ridge, int lawson_iters) {
  for (std::size_t i = 1; i < degrees.size(); ++i)
    if (degrees[i] <= degrees[i - 1])
      throw std::invalid_argument("degrees must be increasing");
  const auto train_pts = sample_disk(radius, train.n_r, train.n_theta);
  const auto valid_pts = sample_disk(radius, 2 * train.n_r, 2 * train.n_theta);

  StudyResult res;
  for (const Target& t : targets) {
    std::vector<Complex> tt, tv;
    for (const Complex z : train_pts) tt.push_back(t(z));
    for (const Complex z : valid_pts) tv.push_back(t(z));
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const int N : degrees) {
      const Basis basis = build_basis(v, train_pts, N);
      FitReport fit = lawson_iters > 0 ? lawson_refine(basis, tt, lawson_iters, ridge)
                                       : least_squares_fit(basis, tt, ridge);
      fit.validation_sup = sup_residual(basis, fit, valid_pts, tv);
      if (fit.validation_sup > prev + 1e-12) monotone = false;
      prev = fit.validation_sup;
      res.rows.push_back({t.name, N, fit.validation_sup, fit.train_l2});
    }
    res.monotone.emplace_back(t.name, monotone);
  }
  return res;
}

}  // namespace diskalg
