#pragma once

// Least-squares and Lawson minimax fits of continuous targets by polynomials
// in the two generators z^2 and v(z) on a disk.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diskalg/symbolic.hpp"

namespace diskalg {

using Sampler = std::function<Complex(Complex)>;

/// Columns (z^2)^j v^k for j + k <= N in graded order (grade j + k, then j
/// descending), each scaled to unit max magnitude on the training points.
struct Basis {
  int degree = 0;
  std::vector<std::pair<int, int>> exponents;
  std::vector<double> scales;
  Eigen::MatrixXcd columns;
  std::vector<Complex> points;
  Sampler v;

  /// Equilibrated basis evaluated at other points.
  Eigen::MatrixXcd evaluate(std::span<const Complex> pts) const;
};

struct FitReport {
  int degree = 0;
  double train_l2 = 0.0;
  double train_sup = 0.0;
  double validation_sup = 0.0;
  /// (max L_ii / min L_ii)^2 of the Cholesky factor of the normal matrix.
  double condition = 0.0;
  Eigen::VectorXcd coefficients;
  bool weight_collapse = false;
};

Basis build_basis(Sampler v, std::span<const Complex> points, int N);

/// Minimizes sum |residual|^2 + ridge sum |coef|^2 through the normal system
/// and an LLT factorization. Throws std::runtime_error when the factorization
/// breaks down.
FitReport least_squares_fit(const Basis& basis, std::span<const Complex> target,
                            double ridge = 1e-12);

/// Weighted variant; weights are per training point.
FitReport weighted_fit(const Basis& basis, std::span<const Complex> target,
                       std::span<const double> weights, double ridge = 1e-12);

/// max |target - fit| over the given points.
double sup_residual(const Basis& basis, const FitReport& fit,
                    std::span<const Complex> points,
                    std::span<const Complex> target);

/// Lawson iteration: weights multiplied by |residual| and renormalized to
/// mean one after every solve. Returns the iterate with the smallest
/// training sup residual, the plain fit included.
FitReport lawson_refine(const Basis& basis, std::span<const Complex> target,
                        int iters, double ridge = 1e-12);

/// A target function: mixed polynomial plus terms c |z|^alpha.
struct Target {
  std::string name;
  MixedPoly poly;
  std::vector<std::pair<Complex, double>> abs_powers;

  Complex operator()(Complex z) const;
};

struct GridSpec {
  int n_r = 12;
  int n_theta = 48;
};

struct StudyRow {
  std::string target;
  int degree;
  double sup_residual;
  double train_l2;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  /// Per target: residual non-increasing in N up to 1e-12 slack.
  std::vector<std::pair<std::string, bool>> monotone;
};

/// Fits every target at every degree. Validation uses twice the radial and
/// angular density of the training grid.
StudyResult convergence_study(const Sampler& v, double radius,
                              std::span<const Target> targets,
                              std::span<const int> degrees,
                              GridSpec train = {}, double ridge = 1e-12,
                              int lawson_iters = 0);

}  // namespace diskalg
