#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "mulab/step_function.hpp"

namespace mulab {

/// A discretized operator: a finite complex matrix plus the quadrature weight
/// of one basis cell. With L2-normalized indicator basis vectors the
/// Hilbert-Schmidt norm is cell_weight^{1/2} times the Frobenius norm, and the
/// singular value function carries value scale sqrt(cell_weight / step_width)
/// so that sum(value^2 * width) is the squared HS norm for any trace width.
/// cell_weight = 1 for spectral-basis operator products, the cell volume for
/// multiplication operators viewed in the function algebra, and the squared
/// cell volume for raw integral kernels.
template <typename Scalar = double>
struct DenseOperator {
  using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix entries;
  Scalar cell_weight = 1;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }

  Scalar hs_norm() const { return std::sqrt(cell_weight) * entries.norm(); }
};

/// Singular values of a complex matrix, descending, with values below
/// 1e-12 * sigma_max clamped to zero.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> singular_values(
    const typename DenseOperator<Scalar>::Matrix& m) {
  Eigen::BDCSVD<typename DenseOperator<Scalar>::Matrix> svd(m);
  if (svd.info() != Eigen::Success) throw std::runtime_error("SVD failed to converge");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sv = svd.singularValues();
  if (sv.size() > 0) {
    const Scalar clamp = Scalar(1e-12) * sv(0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) < clamp) sv(i) = Scalar(0);
  }
  return sv;
}

/// Singular value step function of a discretized operator. Each singular
/// value carries step_width (default 1: the standard trace on B(H)); values
/// are scaled by sqrt(cell_weight / step_width), which preserves all Schatten
/// norms across trace conventions.
template <typename Scalar>
StepFunction<Scalar> singular_step(const DenseOperator<Scalar>& op,
                                   Scalar step_width = Scalar(1)) {
  if (!(step_width > Scalar(0))) throw std::invalid_argument("step width must be positive");
  const Scalar scale = std::sqrt(op.cell_weight / step_width);
  auto sv = singular_values<Scalar>(op.entries);
  std::vector<typename StepFunction<Scalar>::Segment> segs;
  segs.reserve(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) segs.push_back({scale * sv(i), step_width});
  if (segs.empty()) return StepFunction<Scalar>();
  return StepFunction<Scalar>(std::move(segs));
}

/// Largest singular value by power iteration on A* A, deterministic start.
/// Accuracy ~1e-10 relative on the matrices this artifact produces; used for
/// bound checks whose margins dwarf that.
template <typename Scalar>
Scalar operator_norm(const typename DenseOperator<Scalar>::Matrix& m,
                     int max_iters = 200, Scalar tol = Scalar(1e-12)) {
  using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
  if (m.rows() == 0 || m.cols() == 0) return Scalar(0);
  Vector v = Vector::Ones(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) += std::complex<Scalar>(Scalar(0.37) * std::cos(Scalar(2.3) * Scalar(i)),
                                 Scalar(0.21) * std::sin(Scalar(1.7) * Scalar(i) + Scalar(0.5)));
  v.normalize();
  Scalar lambda = 0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = m.adjoint() * (m * v);
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    w /= norm;
    const Scalar diff = (w - v).norm();
    v = std::move(w);
    if (std::abs(norm - lambda) <= tol * std::max(Scalar(1), norm) && diff < Scalar(1e-8)) {
      lambda = norm;
      break;
    }
    lambda = norm;
  }
  return std::sqrt(lambda);
}

}  // namespace mulab
