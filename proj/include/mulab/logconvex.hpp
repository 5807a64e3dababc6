#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mulab/dense_operator.hpp"
#include "mulab/majorization.hpp"
#include "mulab/step_function.hpp"

namespace mulab {

/// A point of the probability simplex: coordinates in [0, 1] summing to 1
/// within 1e-12. Coordinates are clamped into the interval after validation.
template <typename Scalar = double>
struct SimplexPoint {
  std::vector<Scalar> a;

  explicit SimplexPoint(std::vector<Scalar> values) : a(std::move(values)) {
    Scalar sum = 0;
    for (Scalar& x : a) {
      if (!(x >= -Scalar(1e-12)) || !(x <= Scalar(1) + Scalar(1e-12)))
        throw std::invalid_argument("simplex coordinates must lie in [0, 1]");
      sum += x;
      x = std::min(std::max(x, Scalar(0)), Scalar(1));
    }
    if (std::abs(sum - Scalar(1)) > Scalar(1e-12))
      throw std::invalid_argument("simplex coordinates must sum to 1");
  }
};

/// Entropy-type simplex pair: lhs = sum a_k log(e / a_k) with the limit
/// convention at a_k = 0, rhs = 2 sum a_k (1 + log k) with k counted from 1.
template <typename Scalar>
std::pair<Scalar, Scalar> entropy_lagrange_check(const SimplexPoint<Scalar>& pt) {
  Scalar lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < pt.a.size(); ++i) {
    const Scalar ak = pt.a[i];
    if (ak > 0) lhs += ak * (Scalar(1) - std::log(ak));
    rhs += Scalar(2) * ak * (Scalar(1) + std::log(Scalar(i + 1)));
  }
  return {lhs, rhs};
}

/// Both sides of the logarithmic weak-L1 triangle bound, plus the re-indexed
/// right side after sorting the summands by decreasing weak norm (the
/// enumeration that makes the bound tightest).
template <typename Scalar = double>
struct WeakTrianglePair {
  Scalar lhs = 0;
  Scalar rhs = 0;
  Scalar rhs_sorted = 0;
};

/// lhs = || sum x_k ||_{1,inf}; rhs = 4 sum_k ||x_k||_{1,inf} (1 + log k).
/// The matrices are treated in the counting trace.
template <typename Scalar>
WeakTrianglePair<Scalar> weak_l1_log_triangle(const std::vector<DenseOperator<Scalar>>& xs) {
  if (xs.empty()) throw std::invalid_argument("the triangle bound needs at least one matrix");
  const auto rows = xs.front().entries.rows();
  const auto cols = xs.front().entries.cols();
  typename DenseOperator<Scalar>::Matrix sum =
      DenseOperator<Scalar>::Matrix::Zero(rows, cols);
  std::vector<Scalar> weak_norms;
  weak_norms.reserve(xs.size());
  for (const auto& x : xs) {
    if (x.entries.rows() != rows || x.entries.cols() != cols)
      throw std::invalid_argument("the summands must share one shape");
    sum += x.entries;
    DenseOperator<Scalar> plain{x.entries, Scalar(1)};
    weak_norms.push_back(lorentz_quasinorm(singular_step(plain, Scalar(1)), Scalar(1)));
  }
  WeakTrianglePair<Scalar> out;
  DenseOperator<Scalar> total{std::move(sum), Scalar(1)};
  out.lhs = lorentz_quasinorm(singular_step(total, Scalar(1)), Scalar(1));
  for (std::size_t k = 0; k < weak_norms.size(); ++k)
    out.rhs += Scalar(4) * weak_norms[k] * (Scalar(1) + std::log(Scalar(k + 1)));
  std::sort(weak_norms.begin(), weak_norms.end(), std::greater<Scalar>());
  for (std::size_t k = 0; k < weak_norms.size(); ++k)
    out.rhs_sorted += Scalar(4) * weak_norms[k] * (Scalar(1) + std::log(Scalar(k + 1)));
  return out;
}

}  // namespace mulab
