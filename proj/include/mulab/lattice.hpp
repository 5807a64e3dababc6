#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mulab/dense_operator.hpp"
#include "mulab/majorization.hpp"
#include "mulab/step_function.hpp"

namespace mulab {

/// Periodic box [origin, origin + L)^d sampled with N points per axis.
/// Frequencies run over (2pi/L) * {-N/2, ..., N/2 - 1} per axis, stored in
/// DFT index order (k and k - N for k >= N/2).
template <typename Scalar = double>
struct GridSpec {
  int dimension = 1;
  Scalar box_side = 1;
  int points_per_axis = 2;
  Scalar origin = 0;  // 0 for [0,L)^d, -L/2 for centered boxes

  GridSpec(int d, Scalar L, int N, Scalar orig = 0)
      : dimension(d), box_side(L), points_per_axis(N), origin(orig) {
    if (d < 1 || d > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (!(L > Scalar(0))) throw std::invalid_argument("box side must be positive");
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("points per axis must be even and >= 2");
  }

  Scalar spacing() const { return box_side / points_per_axis; }
  Scalar cell_volume() const { return std::pow(spacing(), Scalar(dimension)); }
  Scalar frequency_step() const {
    return Scalar(2) * std::numbers::pi_v<Scalar> / box_side;
  }
  /// Phase-space weight of one frequency cell: (2pi/L)^d / (2pi)^d = L^{-d},
  /// i.e. the Lebesgue frequency cell divided by (2pi)^d.
  Scalar dual_cell_volume() const {
    return std::pow(Scalar(1) / box_side, Scalar(dimension));
  }
  long total_points() const {
    long t = 1;
    for (int i = 0; i < dimension; ++i) t *= points_per_axis;
    return t;
  }

  std::vector<int> index_to_multi(long i) const {
    std::vector<int> m(dimension);
    for (int ax = dimension - 1; ax >= 0; --ax) {
      m[ax] = static_cast<int>(i % points_per_axis);
      i /= points_per_axis;
    }
    return m;
  }

  /// Position of grid point i (axis coordinate = origin + j*h).
  std::vector<Scalar> position(long i) const {
    auto m = index_to_multi(i);
    std::vector<Scalar> x(dimension);
    for (int ax = 0; ax < dimension; ++ax) x[ax] = origin + m[ax] * spacing();
    return x;
  }

  /// Symmetric integer frequency multi-index of DFT bin i.
  std::vector<int> frequency_multi(long i) const {
    auto m = index_to_multi(i);
    for (int& k : m)
      if (k >= points_per_axis / 2) k -= points_per_axis;
    return m;
  }

  /// Continuum frequency of DFT bin i: (2pi/L) * symmetric index.
  std::vector<Scalar> frequency(long i) const {
    auto m = frequency_multi(i);
    std::vector<Scalar> xi(dimension);
    for (int ax = 0; ax < dimension; ++ax) xi[ax] = frequency_step() * m[ax];
    return xi;
  }
};

/// Self-dual box: L = sqrt(2 pi N) makes the position spacing equal the
/// frequency spacing, so one singular value of a discretized product
/// corresponds to exactly one phase-space cell of volume (2pi)^d.
template <typename Scalar = double>
GridSpec<Scalar> self_dual_grid(int d, int N, bool centered = false) {
  const Scalar L = std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar> * N);
  return GridSpec<Scalar>(d, L, N, centered ? -L / 2 : Scalar(0));
}

enum class Domain { position, frequency };

template <typename Scalar = double>
struct SampledFunction {
  GridSpec<Scalar> grid;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> values;
  Domain domain = Domain::position;

  /// L2 norm in the natural measure of the domain: cell volume h^d for
  /// position samples, h^d/(2pi)^d for frequency samples (the phase-space
  /// normalization of the dual variable).
  Scalar l2_norm() const {
    const Scalar w =
        domain == Domain::position ? grid.cell_volume() : grid.dual_cell_volume();
    return std::sqrt(w) * values.norm();
  }
};

template <typename Scalar>
SampledFunction<Scalar> sample_position(
    const GridSpec<Scalar>& grid,
    const std::function<std::complex<Scalar>(const std::vector<Scalar>&)>& f) {
  SampledFunction<Scalar> out{grid, {}, Domain::position};
  out.values.resize(grid.total_points());
  for (long i = 0; i < grid.total_points(); ++i) out.values(i) = f(grid.position(i));
  return out;
}

template <typename Scalar>
SampledFunction<Scalar> sample_frequency(
    const GridSpec<Scalar>& grid,
    const std::function<std::complex<Scalar>(const std::vector<Scalar>&)>& g) {
  SampledFunction<Scalar> out{grid, {}, Domain::frequency};
  out.values.resize(grid.total_points());
  for (long i = 0; i < grid.total_points(); ++i) out.values(i) = g(grid.frequency(i));
  return out;
}

/// Unitary DFT matrix on one axis: F(k,j) = N^{-1/2} exp(-2pi i k j / N).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> dft_matrix_1d(int N) {
  using Cplx = std::complex<Scalar>;
  Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic> F(N, N);
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(N));
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j) {
      const Scalar phase = Scalar(-2) * std::numbers::pi_v<Scalar> *
                           Scalar((static_cast<long>(k) * j) % N) / Scalar(N);
      F(k, j) = scale * Cplx(std::cos(phase), std::sin(phase));
    }
  return F;
}

/// Full grid DFT as a Kronecker power of the 1-d matrix. Guarded against
/// accidental huge materializations; large multidimensional transforms
/// should stream FFTs instead.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> dft_matrix(
    const GridSpec<Scalar>& grid) {
  if (grid.total_points() > 8192)
    throw std::invalid_argument("dense DFT matrix limited to 8192 points");
  auto F1 = dft_matrix_1d<Scalar>(grid.points_per_axis);
  auto F = F1;
  for (int ax = 1; ax < grid.dimension; ++ax) {
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> next(
        F.rows() * F1.rows(), F.cols() * F1.cols());
    for (Eigen::Index i = 0; i < F.rows(); ++i)
      for (Eigen::Index j = 0; j < F.cols(); ++j)
        next.block(i * F1.rows(), j * F1.cols(), F1.rows(), F1.cols()) = F(i, j) * F1;
    F = std::move(next);
  }
  return F;
}

/// Multiplication operator M_f: diagonal in the sample basis. The attached
/// cell weight h^d is the trace measure of the position function algebra, so
/// singular_step(op, h^d) is the rearrangement of |f|.
template <typename Scalar>
DenseOperator<Scalar> mult_operator(const SampledFunction<Scalar>& f) {
  if (f.domain != Domain::position)
    throw std::invalid_argument("mult_operator needs position-space samples");
  DenseOperator<Scalar> op;
  op.entries = f.values.asDiagonal();
  op.cell_weight = f.grid.cell_volume();
  return op;
}

/// Fourier multiplier g(-i grad) = F* diag(g) F. The attached cell weight is
/// the phase-space measure h^d/(2pi)^d of one frequency cell.
template <typename Scalar>
DenseOperator<Scalar> fourier_multiplier(const SampledFunction<Scalar>& g) {
  if (g.domain != Domain::frequency)
    throw std::invalid_argument("fourier_multiplier needs frequency-space samples");
  auto F = dft_matrix(g.grid);
  DenseOperator<Scalar> op;
  op.entries = F.adjoint() * g.values.asDiagonal() * F;
  op.cell_weight = g.grid.dual_cell_volume();
  return op;
}

/// The product M_f g(-i grad) as an operator on the discretized L_2: sample
/// action matrix with the standard counting trace (cell weight 1), so each
/// singular value carries width 1 = one phase-space cell on self-dual grids.
template <typename Scalar>
DenseOperator<Scalar> classical_product(const SampledFunction<Scalar>& f,
                                        const SampledFunction<Scalar>& g) {
  auto mf = mult_operator(f);
  auto gm = fourier_multiplier(g);
  DenseOperator<Scalar> op;
  op.entries = mf.entries * gm.entries;
  op.cell_weight = 1;
  return op;
}

/// mu(f (x) g) over phase space: position samples carry width h^d, frequency
/// samples carry width h^d/(2pi)^d, so the total width equals the number of
/// phase-space cells of volume (2pi)^d covered by the box.
template <typename Scalar>
StepFunction<Scalar> phase_space_rearrangement(const SampledFunction<Scalar>& f,
                                               const SampledFunction<Scalar>& g) {
  std::vector<std::pair<Scalar, Scalar>> fs, gs;
  fs.reserve(f.values.size());
  gs.reserve(g.values.size());
  for (Eigen::Index i = 0; i < f.values.size(); ++i)
    fs.emplace_back(std::abs(f.values(i)), f.grid.cell_volume());
  for (Eigen::Index i = 0; i < g.values.size(); ++i)
    gs.emplace_back(std::abs(g.values(i)), g.grid.dual_cell_volume());
  auto mf = decreasing_rearrangement(fs);
  auto mg = decreasing_rearrangement(gs);
  if (mf.is_zero() || mg.is_zero()) return StepFunction<Scalar>();
  return tensor_rearrangement(mf, mg);
}

/// Per-unit-cube norms ||f chi_{K+m}||_q indexed by the integer lattice point
/// m of each cube.
template <typename Scalar = double>
struct CellNormProfile {
  std::map<std::vector<int>, Scalar> cells;
};

enum class OuterSpace { lp, lp_weak, l2_log };

template <typename Scalar>
CellNormProfile<Scalar> cell_norm_profile(const SampledFunction<Scalar>& f, Scalar inner_q) {
  if (f.domain != Domain::position)
    throw std::invalid_argument("cell norms need position-space samples");
  const auto& grid = f.grid;
  const Scalar L = grid.box_side;
  if (std::abs(L - std::round(L)) > Scalar(1e-9) * std::max(Scalar(1), L))
    throw std::invalid_argument("unit cells need an integer box side");
  const long per_cell = grid.points_per_axis / static_cast<long>(std::round(L));
  if (per_cell * static_cast<long>(std::round(L)) != grid.points_per_axis)
    throw std::invalid_argument("points per axis must be divisible by the box side");
  CellNormProfile<Scalar> profile;
  std::map<std::vector<int>, Scalar> acc;  // sum |f|^q * h^d (or max for q=inf)
  const bool is_inf = std::isinf(inner_q);
  for (long i = 0; i < grid.total_points(); ++i) {
    const auto x = grid.position(i);
    std::vector<int> m(grid.dimension);
    for (int ax = 0; ax < grid.dimension; ++ax)
      m[ax] = static_cast<int>(std::floor(x[ax] + Scalar(1e-12)));
    const Scalar a = std::abs(f.values(i));
    if (is_inf) {
      auto& slot = acc[m];
      slot = std::max(slot, a);
    } else {
      acc[m] += std::pow(a, inner_q) * grid.cell_volume();
    }
  }
  for (auto& [m, v] : acc)
    profile.cells[m] = is_inf ? v : std::pow(v, Scalar(1) / inner_q);
  return profile;
}

/// Outer sequence norm of a cell profile: l_p, weak l_p (sup k^{1/p} a_k over
/// the decreasing rearrangement, k from 1), or l_{2,log} with weight
/// w(m) = 1 + log(max(|m|, 1)).
template <typename Scalar>
Scalar outer_norm(const CellNormProfile<Scalar>& profile, OuterSpace outer, Scalar p) {
  switch (outer) {
    case OuterSpace::lp: {
      Scalar sum = 0;
      for (const auto& [m, a] : profile.cells) sum += std::pow(a, p);
      return std::pow(sum, Scalar(1) / p);
    }
    case OuterSpace::lp_weak: {
      std::vector<std::pair<Scalar, Scalar>> samples;
      for (const auto& [m, a] : profile.cells)
        if (a > Scalar(0)) samples.emplace_back(a, Scalar(1));
      if (samples.empty()) return Scalar(0);
      return lorentz_quasinorm(decreasing_rearrangement(samples), p);
    }
    case OuterSpace::l2_log: {
      Scalar sum = 0;
      for (const auto& [m, a] : profile.cells) {
        Scalar norm2 = 0;
        for (int c : m) norm2 += Scalar(c) * Scalar(c);
        const Scalar w = Scalar(1) + std::log(std::max(std::sqrt(norm2), Scalar(1)));
        sum += w * a * a;
      }
      return std::sqrt(sum);
    }
  }
  throw std::logic_error("unknown outer space");
}

template <typename Scalar>
Scalar mixed_cell_norm(const SampledFunction<Scalar>& f, Scalar inner_q, OuterSpace outer,
                       Scalar p) {
  return outer_norm(cell_norm_profile(f, inner_q), outer, p);
}

}  // namespace mulab
