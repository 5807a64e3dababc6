#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mulab/dense_operator.hpp"
#include "mulab/lattice.hpp"
#include "mulab/majorization.hpp"
#include "mulab/step_function.hpp"

namespace mulab {

/// Canonical 2x2 symplectic block S = ((0,-1),(1,0)).
template <typename Scalar = double>
Eigen::Matrix<Scalar, 2, 2> moyal_theta() {
  Eigen::Matrix<Scalar, 2, 2> s;
  s << Scalar(0), Scalar(-1), Scalar(1), Scalar(0);
  return s;
}

/// Normal form of a real antisymmetric matrix: theta = Q N theta~ N Q^T with
/// Q orthogonal, N positive diagonal (identity on the kernel block) and
/// theta~ block diagonal with symplectic_rank/2 copies of S followed by a
/// zero block.
template <typename Scalar = double>
struct ThetaNormalForm {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> q;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> scaling;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> canonical;
  int symplectic_rank = 0;  // d minus the kernel dimension
};

template <typename Scalar>
ThetaNormalForm<Scalar> theta_normal_form(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& theta) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index d = theta.rows();
  if (theta.cols() != d) throw std::invalid_argument("theta must be square");
  const Scalar scale = std::max(Scalar(1), theta.norm());
  if ((theta + theta.transpose()).norm() > Scalar(1e-12) * scale)
    throw std::invalid_argument("theta must be antisymmetric");

  // theta is normal, so its real Schur form is block diagonal with 2x2
  // antisymmetric blocks and zeros on the diagonal.
  Eigen::RealSchur<Matrix> schur(theta);
  Matrix t = schur.matrixT();
  Matrix q = schur.matrixU();

  std::vector<std::pair<Scalar, Eigen::Index>> pairs;  // (theta_i, column)
  std::vector<Eigen::Index> kernel_cols;
  const Scalar tol = Scalar(1e-12) * scale;
  for (Eigen::Index i = 0; i < d;) {
    if (i + 1 < d && std::abs(t(i + 1, i)) > tol) {
      // Orient the pair so the block reads ((0,-c),(c,0)) with c > 0.
      if (t(i, i + 1) > Scalar(0)) q.col(i).swap(q.col(i + 1));
      pairs.emplace_back(std::abs(t(i + 1, i)), i);
      i += 2;
    } else {
      kernel_cols.push_back(i);
      i += 1;
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  ThetaNormalForm<Scalar> form;
  form.symplectic_rank = 2 * static_cast<int>(pairs.size());
  form.q.resize(d, d);
  Eigen::Index col = 0;
  for (const auto& [theta_i, at] : pairs) {
    form.q.col(col++) = q.col(at);
    form.q.col(col++) = q.col(at + 1);
  }
  for (Eigen::Index i : kernel_cols) form.q.col(col++) = q.col(i);

  form.scaling = Matrix::Identity(d, d);
  form.canonical = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    const Scalar root = std::sqrt(pairs[j].first);
    form.scaling(2 * j, 2 * j) = root;
    form.scaling(2 * j + 1, 2 * j + 1) = root;
    form.canonical(2 * j, 2 * j + 1) = Scalar(-1);
    form.canonical(2 * j + 1, 2 * j) = Scalar(1);
  }
  return form;
}

/// A symbol f on a centered box [-L/2, L/2)^2; stands for the operator
/// x = (2pi)^{-d/4} integral of f(s) U(s) ds with d = 2.
template <typename Scalar = double>
struct Symbol {
  GridSpec<Scalar> grid;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> values;

  Symbol(GridSpec<Scalar> g, Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> v)
      : grid(std::move(g)), values(std::move(v)) {
    if (grid.dimension != 2) throw std::invalid_argument("symbols are two dimensional");
    if (std::abs(grid.origin + grid.box_side / Scalar(2)) >
        Scalar(1e-9) * grid.box_side)
      throw std::invalid_argument("symbols live on a centered box");
    if (values.size() != grid.total_points())
      throw std::invalid_argument("symbol values must fill the grid");
  }

  Scalar l2_norm() const { return std::sqrt(grid.cell_volume()) * values.norm(); }
  Scalar l1_norm() const {
    return grid.cell_volume() * values.template lpNorm<1>();
  }

  SampledFunction<Scalar> as_sampled() const {
    return SampledFunction<Scalar>{grid, values, Domain::position};
  }
};

template <typename Scalar>
Symbol<Scalar> sample_symbol(
    const GridSpec<Scalar>& grid,
    const std::function<std::complex<Scalar>(const std::vector<Scalar>&)>& f) {
  return Symbol<Scalar>(grid, sample_position(grid, f).values);
}

namespace detail {

/// Share of the squared mass outside the inner half-box [-L/4, L/4)^d.
/// Kernel constructions treat the symbol as zero outside the box, so tails
/// near the boundary silently truncate; this quantifies the damage.
template <typename Scalar>
Scalar boundary_mass_fraction(const GridSpec<Scalar>& grid,
                              const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& values) {
  const Scalar quarter = grid.box_side / Scalar(4);
  Scalar total = 0, outer = 0;
  for (long i = 0; i < grid.total_points(); ++i) {
    const Scalar m = std::norm(values(i));
    total += m;
    for (const Scalar x : grid.position(i))
      if (x < -quarter || x >= quarter) {
        outer += m;
        break;
      }
  }
  return total > Scalar(0) ? outer / total : Scalar(0);
}

template <typename Scalar>
void check_same_grid(const GridSpec<Scalar>& a, const GridSpec<Scalar>& b) {
  if (a.dimension != b.dimension || a.points_per_axis != b.points_per_axis ||
      std::abs(a.box_side - b.box_side) > Scalar(1e-12) * a.box_side ||
      std::abs(a.origin - b.origin) > Scalar(1e-12) * a.box_side)
    throw std::invalid_argument("functions must share one grid");
}

/// Nearest lattice step count of a shift component, enforcing alignment.
template <typename Scalar>
long lattice_steps(const GridSpec<Scalar>& grid, Scalar shift, const char* what) {
  const Scalar ratio = shift / grid.spacing();
  const Scalar rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > Scalar(1e-9) * std::max(Scalar(1), std::abs(ratio)))
    throw std::invalid_argument(std::string(what) + " must sit on the grid lattice");
  return static_cast<long>(rounded);
}

inline long wrap_index(long j, long n) { return ((j % n) + n) % n; }

}  // namespace detail

/// Decay diagnostics attached to kernel constructions.
template <typename Scalar = double>
struct DecayReport {
  Scalar boundary_fraction = 0;
  bool accuracy_warning = false;  // boundary mass above 1e-6 of the total
};

template <typename Scalar>
DecayReport<Scalar> decay_report(const Symbol<Scalar>& f) {
  DecayReport<Scalar> report;
  report.boundary_fraction = detail::boundary_mass_fraction(f.grid, f.values);
  report.accuracy_warning = report.boundary_fraction > Scalar(1e-6);
  return report;
}

/// The unitary (U(s) xi)(u) = e^{-(i/2)<s, theta u>} xi(u - s) as a matrix on
/// the periodic grid. The shift s must be lattice aligned.
template <typename Scalar>
DenseOperator<Scalar> u_matrix(const std::vector<Scalar>& s, const GridSpec<Scalar>& grid,
                               const Eigen::Matrix<Scalar, 2, 2>& theta = moyal_theta<Scalar>()) {
  using Cplx = std::complex<Scalar>;
  if (grid.dimension != 2) throw std::invalid_argument("u_matrix needs a 2-d grid");
  if (s.size() != 2) throw std::invalid_argument("shift must have two components");
  if (grid.total_points() > 4096)
    throw std::invalid_argument("dense u_matrix limited to 4096 grid points");
  const long n = grid.points_per_axis;
  const long steps0 = detail::lattice_steps(grid, s[0], "shift");
  const long steps1 = detail::lattice_steps(grid, s[1], "shift");

  DenseOperator<Scalar> op;
  op.entries.setZero(grid.total_points(), grid.total_points());
  op.cell_weight = grid.cell_volume();
  for (long i = 0; i < grid.total_points(); ++i) {
    const auto u = grid.position(i);
    const Scalar phase = -(s[0] * (theta(0, 0) * u[0] + theta(0, 1) * u[1]) +
                           s[1] * (theta(1, 0) * u[0] + theta(1, 1) * u[1])) /
                         Scalar(2);
    const auto m = grid.index_to_multi(i);
    const long col = detail::wrap_index(m[0] - steps0, n) * n +
                     detail::wrap_index(m[1] - steps1, n);
    op.entries(i, col) = std::polar(Scalar(1), phase);
  }
  return op;
}

/// Half-dimension kernel K(u, v) of r0(x) on L_2(R): u, v run over the
/// centered 1-d lattice of the symbol grid, and one row of K carries the
/// quadrature weight h per composition integral (so cell_weight = h^2 and
/// hs_norm = h ||K||_F).
template <typename Scalar = double>
struct HalfDimKernel {
  GridSpec<Scalar> grid;  // the parent 2-d symbol grid
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> values;
  DecayReport<Scalar> decay;

  Scalar hs_norm() const { return grid.spacing() * values.norm(); }

  DenseOperator<Scalar> as_operator() const {
    DenseOperator<Scalar> op;
    op.entries = values;
    op.cell_weight = grid.spacing() * grid.spacing();
    return op;
  }
};

/// Weyl quantization kernel K(u, v) = (F_2^{-1} f)(v - u, (u + v)/2), the
/// integral kernel of r0(x) on L_2(R). The inverse transform in the second
/// variable is evaluated on the half-step lattice (u + v)/2 by one dense
/// product against a phase table, so no self-duality of the grid is needed.
template <typename Scalar>
HalfDimKernel<Scalar> weyl_kernel(const Symbol<Scalar>& f) {
  using Cplx = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;
  const long n = f.grid.points_per_axis;
  const Scalar h = f.grid.spacing();
  const Scalar left = -f.grid.box_side / Scalar(2);

  // Rows of f as a matrix: row a = first coordinate index, col k = second.
  Eigen::Map<const Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      rows(f.values.data(), n, n);

  // E(k, m) = exp(i b_m s_k) with s_k on the grid and b_m on the half-step
  // refinement; T(a, m) = (2pi)^{-1/2} h sum_k f(a, k) E(k, m).
  CMatrix table(n, 2 * n - 1);
  {
    CMatrix e(n, 2 * n - 1);
    for (long k = 0; k < n; ++k) {
      const Scalar s = left + k * h;
      for (long m = 0; m < 2 * n - 1; ++m)
        e(k, m) = std::polar(Scalar(1), (left + m * h / Scalar(2)) * s);
    }
    const Scalar scale = h / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
    table.noalias() = scale * (rows * e);
  }

  HalfDimKernel<Scalar> kernel{f.grid, CMatrix::Zero(n, n), decay_report(f)};
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      const long dj = j - i;  // first argument v - u = dj * h
      if (dj < -n / 2 || dj >= n / 2) continue;  // symbol vanishes off the box
      kernel.values(i, j) = table(dj + n / 2, i + j);
    }
  return kernel;
}

/// Schatten norm of r0(x) with the counting trace tau_theta; p may be
/// infinite (operator norm). p = 2 reproduces ||f||_2 up to quadrature.
template <typename Scalar>
Scalar tau_schatten_norm(const Symbol<Scalar>& f, Scalar p) {
  if (!(p > Scalar(0))) throw std::invalid_argument("Schatten exponent must be positive");
  auto kernel = weyl_kernel(f);
  if (std::isinf(p))
    return f.grid.spacing() * operator_norm<Scalar>(kernel.values);
  auto mu = singular_step(kernel.as_operator(), Scalar(1));
  if (mu.is_zero()) return Scalar(0);
  return schatten_norm(mu, p);
}

/// Symbol of the mixed partial derivative: each commutator with D_k
/// multiplies f by the coordinate s_k.
template <typename Scalar>
Symbol<Scalar> symbol_derivative(const Symbol<Scalar>& f, const std::vector<int>& alpha) {
  if (alpha.size() != 2) throw std::invalid_argument("multi-index must have two entries");
  if (alpha[0] < 0 || alpha[1] < 0) throw std::invalid_argument("multi-index must be nonnegative");
  Symbol<Scalar> out = f;
  for (long i = 0; i < f.grid.total_points(); ++i) {
    const auto s = f.grid.position(i);
    Scalar factor = 1;
    for (int ax = 0; ax < 2; ++ax)
      for (int rep = 0; rep < alpha[ax]; ++rep) factor *= s[ax];
    out.values(i) *= factor;
  }
  return out;
}

/// W^{m,p} norm: sum of tau-Schatten norms of all derivatives of order <= m.
template <typename Scalar>
Scalar sobolev_norm(const Symbol<Scalar>& f, int m, Scalar p) {
  if (m < 0) throw std::invalid_argument("Sobolev order must be nonnegative");
  Scalar sum = 0;
  for (int a0 = 0; a0 <= m; ++a0)
    for (int a1 = 0; a0 + a1 <= m; ++a1)
      sum += tau_schatten_norm(symbol_derivative(f, {a0, a1}), p);
  return sum;
}

/// Twisted convolution: the symbol of the operator product x_f x_g,
/// (f *_theta g)(s) = (2pi)^{-d/4} sum_t f(t) g(s - t) e^{(i/2)<s, theta t>} h^d.
/// The twist phase follows the composition law of the realized unitaries,
/// U(a) U(b) = e^{(i/2)<b, theta a>} U(a + b); g is truncated to the box.
template <typename Scalar>
Symbol<Scalar> twisted_convolve(const Symbol<Scalar>& f, const Symbol<Scalar>& g,
                                const Eigen::Matrix<Scalar, 2, 2>& theta = moyal_theta<Scalar>()) {
  using Cplx = std::complex<Scalar>;
  detail::check_same_grid(f.grid, g.grid);
  const long n = f.grid.points_per_axis;
  const Scalar h = f.grid.spacing();
  const Scalar left = -f.grid.box_side / Scalar(2);
  const Scalar scale = h * h / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);

  Symbol<Scalar> out = f;
  Eigen::Matrix<Cplx, Eigen::Dynamic, 1> phase0(n), phase1(n);
  for (long si = 0; si < f.grid.total_points(); ++si) {
    const auto mc = f.grid.index_to_multi(si);
    const Scalar s0 = left + mc[0] * h, s1 = left + mc[1] * h;
    // <s, theta t> = -<t, theta s> factorizes over the axes of t.
    const Scalar sigma0 = theta(0, 0) * s0 + theta(0, 1) * s1;
    const Scalar sigma1 = theta(1, 0) * s0 + theta(1, 1) * s1;
    for (long a = 0; a < n; ++a) {
      const Scalar t = left + a * h;
      phase0(a) = std::polar(Scalar(1), -t * sigma0 / Scalar(2));
      phase1(a) = std::polar(Scalar(1), -t * sigma1 / Scalar(2));
    }
    Cplx acc(0, 0);
    // g(s - t) sits at index mc - a + n/2; it stays on the grid iff that is
    // in range, which clips the t-sum per axis.
    const long a_lo = std::max<long>(0, mc[0] - n / 2 + 1);
    const long a_hi = std::min<long>(n - 1, mc[0] + n / 2);
    const long b_lo = std::max<long>(0, mc[1] - n / 2 + 1);
    const long b_hi = std::min<long>(n - 1, mc[1] + n / 2);
    for (long a = a_lo; a <= a_hi; ++a) {
      Cplx row(0, 0);
      const long f_base = a * n;
      const long g_base = (mc[0] - a + n / 2) * n + mc[1] + n / 2;
      for (long b = b_lo; b <= b_hi; ++b)
        row += f.values(f_base + b) * g.values(g_base - b) * phase1(b);
      acc += row * phase0(a);
    }
    out.values(si) = scale * acc;
  }
  return out;
}

/// Integral kernel of x g(-i grad_theta) on L_2(R^2):
/// K[t, s] = (2pi)^{-d/4} f(t - s) g(s) e^{(i/2)<s, theta t>}. Raw-kernel
/// convention: cell_weight = (h^d)^2, so singular_step(op, 1) carries the
/// operator's singular values under the standard trace.
template <typename Scalar>
DenseOperator<Scalar> product_kernel(const Symbol<Scalar>& f, const SampledFunction<Scalar>& g,
                                     const Eigen::Matrix<Scalar, 2, 2>& theta = moyal_theta<Scalar>(),
                                     DecayReport<Scalar>* report = nullptr) {
  using Cplx = std::complex<Scalar>;
  detail::check_same_grid(f.grid, g.grid);
  if (g.domain != Domain::position)
    throw std::invalid_argument("the multiplier g is sampled in the momentum coordinates (position domain)");
  const long total = f.grid.total_points();
  if (total > 4096)
    throw std::invalid_argument("dense product kernel limited to 4096 grid points");
  if (report) *report = decay_report(f);

  const long n = f.grid.points_per_axis;
  const Scalar h = f.grid.spacing();
  const Scalar left = -f.grid.box_side / Scalar(2);
  const Scalar scale = Scalar(1) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);

  DenseOperator<Scalar> op;
  op.entries.setZero(total, total);
  op.cell_weight = f.grid.cell_volume() * f.grid.cell_volume();
  for (long i = 0; i < total; ++i) {
    const auto mt = f.grid.index_to_multi(i);
    const Scalar t0 = left + mt[0] * h, t1 = left + mt[1] * h;
    const Scalar sigma0 = theta(0, 0) * t0 + theta(0, 1) * t1;  // (theta t)_0
    const Scalar sigma1 = theta(1, 0) * t0 + theta(1, 1) * t1;
    for (long j = 0; j < total; ++j) {
      const auto ms = f.grid.index_to_multi(j);
      const long d0 = mt[0] - ms[0] + n / 2, d1 = mt[1] - ms[1] + n / 2;
      if (d0 < 0 || d0 >= n || d1 < 0 || d1 >= n) continue;  // f vanishes off the box
      const Cplx gv = g.values(j);
      if (gv == Cplx(0, 0)) continue;
      const Scalar s0 = left + ms[0] * h, s1 = left + ms[1] * h;
      const Scalar phase = (s0 * sigma0 + s1 * sigma1) / Scalar(2);
      op.entries(i, j) = scale * f.values(d0 * n + d1) * gv * std::polar(Scalar(1), phase);
    }
  }
  return op;
}

/// Both sides of the Hilbert-Schmidt identity
/// ||x g(-i grad_theta)||_2 = (2pi)^{-d/4} ||f||_2 ||g||_2, evaluated without
/// materializing the kernel: |K|^2 drops the phase, and the f-mass visible
/// from each column is a box-window sum served by a summed-area table.
template <typename Scalar = double>
struct HsIdentity {
  Scalar hs = 0;
  Scalar rhs = 0;
  Scalar ratio = 0;  // hs / rhs, 0 when rhs vanishes
};

template <typename Scalar>
HsIdentity<Scalar> moyal_hs_identity(const Symbol<Scalar>& f, const SampledFunction<Scalar>& g) {
  detail::check_same_grid(f.grid, g.grid);
  if (g.domain != Domain::position)
    throw std::invalid_argument("the multiplier g is sampled in the momentum coordinates (position domain)");
  const long n = f.grid.points_per_axis;
  const Scalar h = f.grid.spacing();

  // area(a, b) = sum of |f|^2 over indices < (a, b).
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> area(n + 1, n + 1);
  area.setZero();
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b)
      area(a + 1, b + 1) = std::norm(f.values(a * n + b)) + area(a, b + 1) +
                           area(a + 1, b) - area(a, b);
  const auto window = [&](long lo0, long hi0, long lo1, long hi1) {
    return area(hi0 + 1, hi1 + 1) - area(lo0, hi1 + 1) - area(hi0 + 1, lo1) +
           area(lo0, lo1);
  };

  Scalar sum = 0;
  for (long j = 0; j < f.grid.total_points(); ++j) {
    const Scalar gm = std::norm(g.values(j));
    if (gm == Scalar(0)) continue;
    const auto ms = f.grid.index_to_multi(j);
    // t - s on the box restricts the f-index per axis to a window.
    const long lo0 = std::max<long>(0, n / 2 - ms[0]);
    const long hi0 = std::min<long>(n - 1, n + n / 2 - 1 - ms[0]);
    const long lo1 = std::max<long>(0, n / 2 - ms[1]);
    const long hi1 = std::min<long>(n - 1, n + n / 2 - 1 - ms[1]);
    if (lo0 > hi0 || lo1 > hi1) continue;
    sum += gm * window(lo0, hi0, lo1, hi1);
  }

  HsIdentity<Scalar> out;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  out.hs = std::sqrt(sum / two_pi) * h * h;
  out.rhs = f.l2_norm() * g.l2_norm() / std::sqrt(two_pi);
  out.ratio = out.rhs > Scalar(0) ? out.hs / out.rhs : Scalar(0);
  return out;
}

/// Translation unitary V(t) = e^{i t_1 A_1} e^{i t_2 A_2} with
/// e^{i t A_1} = e^{i t d_1} e^{(i t/2) M_{x_2}} and
/// e^{i t A_2} = e^{i t d_2} e^{-(i t/2) M_{x_1}}; shifts act periodically.
template <typename Scalar>
DenseOperator<Scalar> translation_unitary(const std::vector<Scalar>& t,
                                          const GridSpec<Scalar>& grid) {
  using Cplx = std::complex<Scalar>;
  if (grid.dimension != 2) throw std::invalid_argument("translation_unitary needs a 2-d grid");
  if (t.size() != 2) throw std::invalid_argument("shift must have two components");
  if (grid.total_points() > 4096)
    throw std::invalid_argument("dense translation unitary limited to 4096 grid points");
  const long n = grid.points_per_axis;
  const long steps0 = detail::lattice_steps(grid, t[0], "translation");
  const long steps1 = detail::lattice_steps(grid, t[1], "translation");

  using CMatrix = typename DenseOperator<Scalar>::Matrix;
  CMatrix g1 = CMatrix::Zero(grid.total_points(), grid.total_points());
  CMatrix g2 = CMatrix::Zero(grid.total_points(), grid.total_points());
  for (long i = 0; i < grid.total_points(); ++i) {
    const auto m = grid.index_to_multi(i);
    const auto u = grid.position(i);
    const long shifted0 = detail::wrap_index(m[0] + steps0, n) * n + m[1];
    g1(i, shifted0) = std::polar(Scalar(1), t[0] * u[1] / Scalar(2));
    const long shifted1 = m[0] * n + detail::wrap_index(m[1] + steps1, n);
    g2(i, shifted1) = std::polar(Scalar(1), -t[1] * u[0] / Scalar(2));
  }

  DenseOperator<Scalar> op;
  op.entries = g1 * g2;
  op.cell_weight = grid.cell_volume();
  return op;
}

/// Mode selector for the Sobolev-Cwikel ratios. The resolvent mode needs only
/// the order k; the lattice and interpolation modes carry the multiplier g.
template <typename Scalar = double>
struct SobolevCwikelMode {
  enum class Kind { resolvent_power, weak_lattice, strong_lattice, interpolation_p_gt_2 };

  Kind kind = Kind::resolvent_power;
  int order = 0;
  std::optional<SampledFunction<Scalar>> g;

  static SobolevCwikelMode resolvent_power(int k) {
    if (k < 0) throw std::invalid_argument("resolvent order must be nonnegative");
    return {Kind::resolvent_power, k, std::nullopt};
  }
  static SobolevCwikelMode weak_lattice(SampledFunction<Scalar> g) {
    return {Kind::weak_lattice, 0, std::move(g)};
  }
  static SobolevCwikelMode strong_lattice(SampledFunction<Scalar> g) {
    return {Kind::strong_lattice, 0, std::move(g)};
  }
  static SobolevCwikelMode interpolation_p_gt_2(SampledFunction<Scalar> g) {
    return {Kind::interpolation_p_gt_2, 0, std::move(g)};
  }
};

/// Ratio of an operator-side quantity to its claimed bound. resolvent_power:
/// ||(1-Delta)^{(k-1)/2 - d/4} x (1-Delta)^{-(k+1)/2 - d/4}||_p over
/// 2^k ||x||_{W^{k,p}}, with (1-Delta_theta)^a acting as multiplication by
/// (1+|t|^2)^a. weak/strong_lattice: the L_{p,infty} / L_p norm of
/// x g(-i grad) over ||x||_{W^{2,p}} times the lattice norm of g.
/// interpolation_p_gt_2: the L_p norm over the tensor rearrangement bound.
template <typename Scalar>
Scalar sobolev_cwikel_ratio(const Symbol<Scalar>& f, Scalar p,
                            const SobolevCwikelMode<Scalar>& mode) {
  using Kind = typename SobolevCwikelMode<Scalar>::Kind;
  const bool lattice_like = mode.kind != Kind::resolvent_power;
  if (lattice_like && !mode.g)
    throw std::invalid_argument("this mode needs the multiplier g");
  if (mode.kind == Kind::interpolation_p_gt_2) {
    if (!(p > Scalar(2))) throw std::invalid_argument("interpolation mode needs p > 2");
  } else if (!(p >= Scalar(1) && p <= Scalar(2))) {
    throw std::invalid_argument("this mode needs 1 <= p <= 2");
  }

  if (mode.kind == Kind::resolvent_power) {
    const int k = mode.order;
    const Scalar a_left = (Scalar(k) - 1) / Scalar(2) - Scalar(0.5);   // d = 2
    const Scalar a_right = -(Scalar(k) + 1) / Scalar(2) - Scalar(0.5);
    auto weight = [&](Scalar a) {
      return sample_position<Scalar>(f.grid, [&](const std::vector<Scalar>& t) {
        return std::complex<Scalar>(std::pow(Scalar(1) + t[0] * t[0] + t[1] * t[1], a), 0);
      });
    };
    auto op = product_kernel(f, weight(a_right));
    const auto row_scale = weight(a_left).values;
    for (Eigen::Index i = 0; i < op.entries.rows(); ++i)
      op.entries.row(i) *= row_scale(i);
    auto mu = singular_step(op, Scalar(1));
    const Scalar numerator = mu.is_zero() ? Scalar(0) : schatten_norm(mu, p);
    if (numerator == Scalar(0)) return Scalar(0);
    return numerator / (std::ldexp(Scalar(1), k) * sobolev_norm(f, k, p));
  }

  auto op = product_kernel(f, *mode.g);
  auto mu = singular_step(op, Scalar(1));
  if (mu.is_zero()) return Scalar(0);

  if (mode.kind == Kind::interpolation_p_gt_2) {
    auto kernel = weyl_kernel(f);
    auto mu_x = singular_step(kernel.as_operator(), Scalar(1));
    std::vector<std::pair<Scalar, Scalar>> gs;
    gs.reserve(mode.g->values.size());
    for (Eigen::Index i = 0; i < mode.g->values.size(); ++i)
      gs.emplace_back(std::abs(mode.g->values(i)), f.grid.cell_volume());
    auto mu_g = decreasing_rearrangement(gs);
    if (mu_x.is_zero() || mu_g.is_zero()) return Scalar(0);
    const Scalar denom = schatten_norm(tensor_rearrangement(mu_x, mu_g), p);
    return schatten_norm(mu, p) / denom;
  }

  const Scalar sobolev = sobolev_norm(f, 2, p);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  if (mode.kind == Kind::weak_lattice) {
    const Scalar lattice = mixed_cell_norm(*mode.g, inf, OuterSpace::lp_weak, p);
    return lorentz_quasinorm(mu, p) / (sobolev * lattice);
  }
  const Scalar lattice = mixed_cell_norm(*mode.g, inf, OuterSpace::lp, p);
  return schatten_norm(mu, p) / (sobolev * lattice);
}

}  // namespace mulab
