#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mulab/dense_operator.hpp"
#include "mulab/lattice.hpp"
#include "mulab/majorization.hpp"
#include "mulab/step_function.hpp"

namespace mulab {

namespace detail {

/// Dyadic band index of a positive value: v lies in [2^k, 2^{k+1}).
/// ilogb is exact at the band edges, so boundary values join the band whose
/// left endpoint they equal.
inline int dyadic_band(double v) { return std::ilogb(v); }

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nonnegative_samples(
    const SampledFunction<Scalar>& f, const char* what) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(f.values.size());
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const auto v = f.values(i);
    if (std::abs(v.imag()) > Scalar(1e-12) || v.real() < -Scalar(1e-12))
      throw std::invalid_argument(std::string(what) +
                                  ": samples must be real and nonnegative");
    out(i) = std::max(v.real(), Scalar(0));
  }
  return out;
}

/// Difference kernel of a frequency symbol: conjugating diag(c) by the DFT
/// gives a (multi-)circulant, Y[i,j] = w(i - j), with
/// w(r) = (1/Ntot) sum_m c_m e^{2 pi i <m, r> / N}.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> circulant_kernel(
    const GridSpec<Scalar>& grid,
    const Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>& c) {
  const long n_tot = grid.total_points();
  const long n_axis = grid.points_per_axis;
  std::vector<std::complex<Scalar>> table(n_axis);
  for (long q = 0; q < n_axis; ++q) {
    const Scalar ang = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(q) / Scalar(n_axis);
    table[q] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<std::vector<int>> multi(n_tot);
  for (long i = 0; i < n_tot; ++i) multi[i] = grid.index_to_multi(i);
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> w =
      Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>::Zero(n_tot);
  for (long m = 0; m < n_tot; ++m) {
    if (c(m) == std::complex<Scalar>(0)) continue;
    for (long r = 0; r < n_tot; ++r) {
      long q = 0;
      for (int ax = 0; ax < grid.dimension; ++ax) q += long(multi[m][ax]) * multi[r][ax];
      w(r) += c(m) * table[q % n_axis];
    }
  }
  return w / Scalar(n_tot);
}

/// Flat index of the componentwise difference (i - j mod N).
template <typename Scalar>
long difference_index(const GridSpec<Scalar>& grid, const std::vector<int>& mi,
                      const std::vector<int>& mj) {
  const long n_axis = grid.points_per_axis;
  long flat = 0;
  for (int ax = 0; ax < grid.dimension; ++ax)
    flat = flat * n_axis + ((mi[ax] - mj[ax]) % n_axis + n_axis) % n_axis;
  return flat;
}

inline void check_matching_grids(const GridSpec<double>& a, const GridSpec<double>& b) {
  if (a.dimension != b.dimension || a.points_per_axis != b.points_per_axis ||
      std::abs(a.box_side - b.box_side) > 1e-12 * std::max(1.0, a.box_side))
    throw std::invalid_argument("the two symbols must share one grid");
}

/// Plain-Lebesgue L2 norm of the samples (position: h^d cells; frequency:
/// (2pi/L)^d cells, i.e. without the phase-space 1/(2pi)^d).
template <typename Scalar>
Scalar lebesgue_l2(const SampledFunction<Scalar>& f) {
  const Scalar w = f.domain == Domain::position
                       ? f.grid.cell_volume()
                       : std::pow(f.grid.frequency_step(), Scalar(f.grid.dimension));
  return std::sqrt(w) * f.values.norm();
}

/// Unit-cube cell profile of a sampled symbol in either domain, with plain
/// Lebesgue quadrature weights. Cubes are anchored at the integer lattice;
/// the grid box does not have to align with them, so keep supports inside
/// whole cubes when exact readings matter.
template <typename Scalar>
CellNormProfile<Scalar> sampled_cell_profile(const SampledFunction<Scalar>& f,
                                             Scalar inner_q) {
  const auto& grid = f.grid;
  const Scalar w = f.domain == Domain::position
                       ? grid.cell_volume()
                       : std::pow(grid.frequency_step(), Scalar(grid.dimension));
  const bool is_inf = std::isinf(inner_q);
  CellNormProfile<Scalar> profile;
  for (long i = 0; i < grid.total_points(); ++i) {
    const Scalar a = std::abs(f.values(i));
    if (a == Scalar(0)) continue;
    const auto x = f.domain == Domain::position ? grid.position(i) : grid.frequency(i);
    std::vector<int> m(grid.dimension);
    for (int ax = 0; ax < grid.dimension; ++ax)
      m[ax] = static_cast<int>(std::floor(x[ax] + Scalar(1e-12)));
    auto& slot = profile.cells[m];
    if (is_inf)
      slot = std::max(slot, a);
    else
      slot += std::pow(a, inner_q) * w;
  }
  if (!is_inf)
    for (auto& [m, v] : profile.cells) v = std::pow(v, Scalar(1) / inner_q);
  return profile;
}

/// Adaptive Simpson quadrature with the usual Richardson stopping rule.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 28) {
  const auto simpson = [&f](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  const std::function<double(double, double, double, double, int)> rec =
      [&](double lo, double hi, double whole, double eps, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid);
    const double right = simpson(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, left, 0.5 * eps, d - 1) + rec(mid, hi, right, 0.5 * eps, d - 1);
  };
  return rec(a, b, simpson(a, b), tol, depth);
}

}  // namespace detail

/// Dyadic spectral slices x_k = x E_x[2^k, 2^{k+1}) of a positive operator.
/// Eigenvalues exactly equal to 0 carry no slice.
template <typename Scalar = double>
std::map<int, DenseOperator<Scalar>> dyadic_slices(const DenseOperator<Scalar>& x) {
  using Matrix = typename DenseOperator<Scalar>::Matrix;
  const auto& m = x.entries;
  if (m.rows() != m.cols()) throw std::invalid_argument("dyadic slices need a square operator");
  const Scalar scale = std::max(Scalar(1), m.norm());
  if ((m - m.adjoint()).norm() > Scalar(1e-10) * scale)
    throw std::invalid_argument("dyadic slices need a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const auto& vals = eig.eigenvalues();
  if (vals.size() > 0 && vals.minCoeff() < -Scalar(1e-10) * scale)
    throw std::invalid_argument("dyadic slices need a positive operator");
  std::map<int, DenseOperator<Scalar>> slices;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const Scalar lam = vals(i);
    if (lam <= Scalar(0)) continue;
    const int k = detail::dyadic_band(static_cast<double>(lam));
    auto it = slices.find(k);
    if (it == slices.end()) {
      DenseOperator<Scalar> s;
      s.entries = Matrix::Zero(m.rows(), m.cols());
      s.cell_weight = x.cell_weight;
      it = slices.emplace(k, std::move(s)).first;
    }
    it->second.entries += lam * (eig.eigenvectors().col(i) * eig.eigenvectors().col(i).adjoint());
  }
  return slices;
}

/// The dyadic head/tail split of the product x y = M_f g(-i grad) at level n:
/// A_n collects the slice products with k + l < n, B_n the rest. Carries the
/// two bound witnesses: the uniform norm of A_n against 2^{n+2}, and the
/// Hilbert-Schmidt square of B_n against the tensor tail above 2^n.
template <typename Scalar = double>
struct DyadicSplit {
  std::map<int, DenseOperator<Scalar>> slices;       // multiplication side, diag(f 1_band)
  std::map<int, DenseOperator<Scalar>> dual_slices;  // multiplier side, (g 1_band)(-i grad)
  int level = 0;
  DenseOperator<Scalar> a_part;
  DenseOperator<Scalar> b_part;
  Scalar a_uniform_norm = 0;
  Scalar b_hs_sq = 0;
  Scalar tensor_tail_hs_sq = 0;  // ||(x tensor y) E_{x tensor y}[2^n, inf)||_2^2
  Scalar a_uniform_cap() const { return std::ldexp(Scalar(1), level + 2); }
};

template <typename Scalar>
DyadicSplit<Scalar> an_bn_split(const SampledFunction<Scalar>& f,
                                const SampledFunction<Scalar>& g, int n) {
  using Matrix = typename DenseOperator<Scalar>::Matrix;
  using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
  if (f.domain != Domain::position || g.domain != Domain::frequency)
    throw std::invalid_argument("the split expects a position and a frequency symbol");
  detail::check_matching_grids(f.grid, g.grid);
  const auto fv = detail::nonnegative_samples(f, "an_bn_split f");
  const auto gv = detail::nonnegative_samples(g, "an_bn_split g");
  const auto& grid = f.grid;
  const long n_tot = grid.total_points();

  constexpr int kNoBand = std::numeric_limits<int>::min();
  std::vector<int> f_band(n_tot, kNoBand), g_band(n_tot, kNoBand);
  for (long i = 0; i < n_tot; ++i) {
    if (fv(i) > 0) f_band[i] = detail::dyadic_band(static_cast<double>(fv(i)));
    if (gv(i) > 0) g_band[i] = detail::dyadic_band(static_cast<double>(gv(i)));
  }

  DyadicSplit<Scalar> split;
  split.level = n;

  for (long i = 0; i < n_tot; ++i) {
    if (f_band[i] == kNoBand) continue;
    auto it = split.slices.find(f_band[i]);
    if (it == split.slices.end()) {
      DenseOperator<Scalar> s;
      s.entries = Matrix::Zero(n_tot, n_tot);
      s.cell_weight = grid.cell_volume();
      it = split.slices.emplace(f_band[i], std::move(s)).first;
    }
    it->second.entries(i, i) = fv(i);
  }

  std::vector<std::vector<int>> multi(n_tot);
  for (long i = 0; i < n_tot; ++i) multi[i] = grid.index_to_multi(i);

  std::map<int, Vector> band_symbols;  // g restricted to one band
  for (long j = 0; j < n_tot; ++j) {
    if (g_band[j] == kNoBand) continue;
    auto it = band_symbols.find(g_band[j]);
    if (it == band_symbols.end()) it = band_symbols.emplace(g_band[j], Vector::Zero(n_tot)).first;
    it->second(j) = gv(j);
  }
  for (const auto& [l, sym] : band_symbols) {
    DenseOperator<Scalar> y;
    y.entries = Matrix(n_tot, n_tot);
    y.cell_weight = grid.dual_cell_volume();
    const auto kern = detail::circulant_kernel(grid, sym);
    for (long i = 0; i < n_tot; ++i)
      for (long j = 0; j < n_tot; ++j)
        y.entries(i, j) = kern(detail::difference_index(grid, multi[i], multi[j]));
    split.dual_slices.emplace(l, std::move(y));
  }

  // A_n rows: row i needs the multiplier of g cut to bands l < n - k(i).
  // Cumulative band symbols give one circulant kernel per distinct threshold.
  std::map<int, Vector> threshold_kernels;  // t -> kernel of g restricted to l < t
  for (long i = 0; i < n_tot; ++i) {
    if (f_band[i] == kNoBand) continue;
    const int t = n - f_band[i];
    if (threshold_kernels.count(t)) continue;
    Vector c = Vector::Zero(n_tot);
    for (long j = 0; j < n_tot; ++j)
      if (g_band[j] != kNoBand && g_band[j] < t) c(j) = gv(j);
    threshold_kernels.emplace(t, detail::circulant_kernel(grid, c));
  }
  Vector full_symbol = Vector::Zero(n_tot);
  for (long j = 0; j < n_tot; ++j) full_symbol(j) = gv(j);
  const Vector full_kernel = detail::circulant_kernel(grid, full_symbol);

  split.a_part.entries = Matrix::Zero(n_tot, n_tot);
  split.b_part.entries = Matrix::Zero(n_tot, n_tot);
  split.a_part.cell_weight = 1;
  split.b_part.cell_weight = 1;
  for (long i = 0; i < n_tot; ++i) {
    if (f_band[i] == kNoBand) continue;
    const Vector& head = threshold_kernels.at(n - f_band[i]);
    for (long j = 0; j < n_tot; ++j) {
      const long r = detail::difference_index(grid, multi[i], multi[j]);
      const auto full = fv(i) * full_kernel(r);
      const auto a = fv(i) * head(r);
      split.a_part.entries(i, j) = a;
      split.b_part.entries(i, j) = full - a;
    }
  }

  split.a_uniform_norm = operator_norm<Scalar>(split.a_part.entries);
  split.b_hs_sq = split.b_part.entries.squaredNorm();

  // Tensor tail: cells of x tensor y with value >= 2^n, in the phase-space
  // measure (h^d per position cell, L^{-d} per frequency cell).
  const Scalar cell = grid.cell_volume() * grid.dual_cell_volume();
  const Scalar cut = std::ldexp(Scalar(1), n);
  std::vector<Scalar> gs;
  gs.reserve(n_tot);
  for (long j = 0; j < n_tot; ++j)
    if (gv(j) > 0) gs.push_back(gv(j));
  std::sort(gs.begin(), gs.end());
  std::vector<Scalar> g_sq_suffix(gs.size() + 1, 0);  // sum of squares from index k on
  for (long k = long(gs.size()) - 1; k >= 0; --k)
    g_sq_suffix[k] = g_sq_suffix[k + 1] + gs[k] * gs[k];
  Scalar tail = 0;
  for (long i = 0; i < n_tot; ++i) {
    if (fv(i) <= 0) continue;
    const Scalar thresh = cut / fv(i);
    const auto it = std::lower_bound(gs.begin(), gs.end(), thresh);
    tail += fv(i) * fv(i) * g_sq_suffix[it - gs.begin()];
  }
  split.tensor_tail_hs_sq = tail * cell;
  return split;
}

/// Uniform norms of the diagonal sums sum_{k+l=m} x_k y_l for every populated
/// m < n, the terms of the series that bounds ||A_n||_inf by 2^{n+2}.
template <typename Scalar>
std::vector<std::pair<int, Scalar>> dyadic_series_terms(const SampledFunction<Scalar>& f,
                                                        const SampledFunction<Scalar>& g,
                                                        int n) {
  using Matrix = typename DenseOperator<Scalar>::Matrix;
  using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
  if (f.domain != Domain::position || g.domain != Domain::frequency)
    throw std::invalid_argument("the series expects a position and a frequency symbol");
  detail::check_matching_grids(f.grid, g.grid);
  const auto fv = detail::nonnegative_samples(f, "dyadic_series_terms f");
  const auto gv = detail::nonnegative_samples(g, "dyadic_series_terms g");
  const auto& grid = f.grid;
  const long n_tot = grid.total_points();
  constexpr int kNoBand = std::numeric_limits<int>::min();
  std::vector<int> f_band(n_tot, kNoBand);
  std::map<int, Vector> g_kernels;
  std::vector<std::vector<int>> multi(n_tot);
  for (long i = 0; i < n_tot; ++i) multi[i] = grid.index_to_multi(i);
  std::map<int, Vector> band_symbols;
  for (long j = 0; j < n_tot; ++j) {
    if (gv(j) <= 0) continue;
    const int l = detail::dyadic_band(static_cast<double>(gv(j)));
    auto it = band_symbols.find(l);
    if (it == band_symbols.end()) it = band_symbols.emplace(l, Vector::Zero(n_tot)).first;
    it->second(j) = gv(j);
  }
  for (const auto& [l, sym] : band_symbols)
    g_kernels.emplace(l, detail::circulant_kernel(grid, sym));
  std::vector<int> f_bands_present;
  for (long i = 0; i < n_tot; ++i)
    if (fv(i) > 0) {
      f_band[i] = detail::dyadic_band(static_cast<double>(fv(i)));
      f_bands_present.push_back(f_band[i]);
    }
  std::sort(f_bands_present.begin(), f_bands_present.end());
  f_bands_present.erase(std::unique(f_bands_present.begin(), f_bands_present.end()),
                        f_bands_present.end());

  std::vector<int> ms;
  for (int k : f_bands_present)
    for (const auto& [l, kern] : g_kernels)
      if (k + l < n) ms.push_back(k + l);
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  std::vector<std::pair<int, Scalar>> out;
  for (int m : ms) {
    Matrix term = Matrix::Zero(n_tot, n_tot);
    for (long i = 0; i < n_tot; ++i) {
      if (f_band[i] == kNoBand) continue;
      const auto it = g_kernels.find(m - f_band[i]);
      if (it == g_kernels.end()) continue;
      for (long j = 0; j < n_tot; ++j)
        term(i, j) = fv(i) * it->second(detail::difference_index(grid, multi[i], multi[j]));
    }
    out.emplace_back(m, operator_norm<Scalar>(term));
  }
  return out;
}

/// Submajorization of the squared product rearrangement by a constant times
/// the squared phase-space tensor rearrangement. The default 532 is the
/// general two-sided constant; positive bounded symbols satisfy the tighter
/// 130 variant.
template <typename Scalar>
MajorizationVerdict<Scalar> check_submajorization_532(const SampledFunction<Scalar>& f,
                                                      const SampledFunction<Scalar>& g,
                                                      Scalar constant = Scalar(532)) {
  auto mu = singular_step(classical_product(f, g), Scalar(1));
  auto lhs = power(mu, Scalar(2));
  auto tensor = phase_space_rearrangement(f, g);
  if (tensor.is_zero()) {
    MajorizationVerdict<Scalar> v;
    v.holds = true;
    v.observed_constant = 0;
    v.totals = {Scalar(0), lhs.total_integral()};
    return v;
  }
  return submajorizes(power(tensor, Scalar(2)), lhs, constant);
}

/// Projection inequality E_{x tensor y}[2^n, inf) >= sum_{k+l>=n} E_k tensor
/// E_l on the commuting grid model, where both sides are diagonal in the
/// product basis, so the matrix order is the entrywise one.
template <typename Scalar>
bool projection_inequality_check(const SampledFunction<Scalar>& f,
                                 const SampledFunction<Scalar>& g, int n) {
  const auto fv = detail::nonnegative_samples(f, "projection_inequality f");
  const auto gv = detail::nonnegative_samples(g, "projection_inequality g");
  const Scalar cut = std::ldexp(Scalar(1), n);
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    if (fv(i) <= 0) continue;
    const int k = detail::dyadic_band(static_cast<double>(fv(i)));
    for (Eigen::Index j = 0; j < gv.size(); ++j) {
      if (gv(j) <= 0) continue;
      const int l = detail::dyadic_band(static_cast<double>(gv(j)));
      if (k + l >= n && !(fv(i) * gv(j) >= cut)) return false;
    }
  }
  return true;
}

/// Fourier-coefficient pair for psi = phi * Finv(h): returns
/// (sum_k |psi_hat(k)|^p over the coefficient lattice, ||h||_1). The bump phi
/// is the tensor power of eta with eta = 1 on [-1,1], a smooth shoulder on
/// 1 < |v| < 3, and 0 beyond.
namespace detail {
inline double bump_eta(double v) {
  const double a = std::abs(v);
  if (a <= 1.0) return 1.0;
  if (a >= 3.0) return 0.0;
  const double w = (a - 1.0) / 2.0;
  return std::exp(1.0 - 1.0 / (1.0 - w * w));
}
}  // namespace detail

template <typename Scalar>
std::pair<Scalar, Scalar> fourier_coeff_lemma(const SampledFunction<Scalar>& h, Scalar p,
                                              int coeff_points = 256) {
  if (!(p > 0) || p > 2) throw std::invalid_argument("the coefficient sum needs 0 < p <= 2");
  if (h.domain != Domain::position)
    throw std::invalid_argument("h is a position-space density");
  const auto& grid = h.grid;
  const int d = grid.dimension;
  const int M = coeff_points;
  long m_tot = 1;
  for (int ax = 0; ax < d; ++ax) m_tot *= M;
  if (m_tot > (1 << 20)) throw std::invalid_argument("coefficient lattice too large");

  Scalar h_l1 = 0;
  for (long i = 0; i < grid.total_points(); ++i)
    h_l1 += std::abs(h.values(i)) * grid.cell_volume();

  // psi on the midpoint grid over [-pi, pi]^d
  const Scalar du = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(M);
  std::vector<std::complex<Scalar>> psi(m_tot);
  std::vector<std::vector<int>> u_multi(m_tot);
  {
    std::vector<int> idx(d, 0);
    for (long flat = 0; flat < m_tot; ++flat) {
      u_multi[flat] = idx;
      std::vector<Scalar> u(d);
      Scalar phi = 1;
      for (int ax = 0; ax < d; ++ax) {
        u[ax] = -std::numbers::pi_v<Scalar> + (Scalar(idx[ax]) + Scalar(0.5)) * du;
        phi *= static_cast<Scalar>(detail::bump_eta(static_cast<double>(u[ax])));
      }
      std::complex<Scalar> finv = 0;
      if (phi != Scalar(0)) {
        for (long i = 0; i < grid.total_points(); ++i) {
          if (h.values(i) == std::complex<Scalar>(0)) continue;
          const auto x = grid.position(i);
          Scalar dot = 0;
          for (int ax = 0; ax < d; ++ax) dot += u[ax] * x[ax];
          finv += h.values(i) * std::complex<Scalar>(std::cos(dot), std::sin(dot));
        }
        finv *= grid.cell_volume() *
                std::pow(Scalar(2) * std::numbers::pi_v<Scalar>, -Scalar(d) / 2);
      }
      psi[flat] = phi * finv;
      for (int ax = d - 1; ax >= 0; --ax) {
        if (++idx[ax] < M) break;
        idx[ax] = 0;
      }
    }
  }

  // Fourier coefficients on [-pi, pi]^d at k in [-M/2, M/2)^d
  Scalar sum = 0;
  std::vector<int> k(d, -M / 2);
  for (long kc = 0; kc < m_tot; ++kc) {
    std::complex<Scalar> coeff = 0;
    for (long flat = 0; flat < m_tot; ++flat) {
      if (psi[flat] == std::complex<Scalar>(0)) continue;
      Scalar dot = 0;
      for (int ax = 0; ax < d; ++ax)
        dot += Scalar(k[ax]) *
               (-std::numbers::pi_v<Scalar> + (Scalar(u_multi[flat][ax]) + Scalar(0.5)) * du);
      coeff += psi[flat] * std::complex<Scalar>(std::cos(dot), -std::sin(dot));
    }
    coeff /= Scalar(m_tot);
    sum += std::pow(std::abs(coeff), p);
    for (int ax = d - 1; ax >= 0; --ax) {
      if (++k[ax] < M / 2) break;
      k[ax] = -M / 2;
    }
  }
  return {sum, h_l1};
}

/// Schatten-p norm of the product against the plain product of L2 norms,
/// for symbols supported in one unit cube.
template <typename Scalar>
Scalar compact_support_ratio(const SampledFunction<Scalar>& f, const SampledFunction<Scalar>& g,
                             Scalar p) {
  if (!(p > 0) || p > 2) throw std::invalid_argument("the compact-support ratio needs 0 < p <= 2");
  auto mu = singular_step(classical_product(f, g), Scalar(1));
  const Scalar num = schatten_norm(mu, p);
  const Scalar den = detail::lebesgue_l2(f) * detail::lebesgue_l2(g);
  if (den == Scalar(0)) return num == Scalar(0) ? Scalar(0) : std::numeric_limits<Scalar>::infinity();
  return num / den;
}

enum class CwikelFlavor { strong, weak };

template <typename Scalar = double>
struct CwikelEstimate {
  Scalar operator_side = 0;
  Scalar mixed_side = 0;
  Scalar ratio = 0;
};

/// Unit-cube profile of the tensor symbol f tensor g on the doubled lattice:
/// cell (m1, m2) carries ||f chi_{K+m1}||_2 ||g chi_{K+m2}||_2 with plain
/// Lebesgue measure on both factors.
template <typename Scalar>
CellNormProfile<Scalar> tensor_cell_profile(const SampledFunction<Scalar>& f,
                                            const SampledFunction<Scalar>& g,
                                            Scalar inner_qf = 2, Scalar inner_qg = 2) {
  const auto pf = detail::sampled_cell_profile(f, inner_qf);
  const auto pg = detail::sampled_cell_profile(g, inner_qg);
  CellNormProfile<Scalar> out;
  for (const auto& [mf, vf] : pf.cells) {
    if (vf == Scalar(0)) continue;
    for (const auto& [mg, vg] : pg.cells) {
      if (vg == Scalar(0)) continue;
      std::vector<int> key = mf;
      key.insert(key.end(), mg.begin(), mg.end());
      out.cells[std::move(key)] = vf * vg;
    }
  }
  return out;
}

/// Small-exponent Cwikel estimate: Schatten (strong) or weak-Schatten (weak)
/// norm of the product against the mixed cell norm of f tensor g in
/// l_p(L_2) or l_{p,inf}(L_2).
template <typename Scalar>
CwikelEstimate<Scalar> cwikel_small_p(const SampledFunction<Scalar>& f,
                                      const SampledFunction<Scalar>& g, Scalar p,
                                      CwikelFlavor flavor) {
  if (!(p > 0) || !(p < 2)) throw std::invalid_argument("the small-p estimate needs 0 < p < 2");
  auto mu = singular_step(classical_product(f, g), Scalar(1));
  CwikelEstimate<Scalar> est;
  est.operator_side =
      flavor == CwikelFlavor::strong ? schatten_norm(mu, p) : lorentz_quasinorm(mu, p);
  const auto profile = tensor_cell_profile(f, g);
  est.mixed_side = outer_norm(
      profile, flavor == CwikelFlavor::strong ? OuterSpace::lp : OuterSpace::lp_weak, p);
  est.ratio = est.mixed_side > Scalar(0)
                  ? est.operator_side / est.mixed_side
                  : (est.operator_side == Scalar(0) ? Scalar(0)
                                                    : std::numeric_limits<Scalar>::infinity());
  return est;
}

template <typename Scalar = double>
struct WeakL2Estimate {
  Scalar lhs = 0;
  Scalar rhs = 0;
  Scalar ratio = 0;
};

/// Weak-L2 positive result: ||M_f g(-i grad)||_{2,inf} against
/// ||f||_{l_{2,log}(L_inf)} ||g||_{l_{2,inf}(L_4)}.
template <typename Scalar>
WeakL2Estimate<Scalar> weak_l2_positive(const SampledFunction<Scalar>& f,
                                        const SampledFunction<Scalar>& g) {
  WeakL2Estimate<Scalar> est;
  est.lhs = lorentz_quasinorm(singular_step(classical_product(f, g), Scalar(1)), Scalar(2));
  const Scalar f_side = outer_norm(
      detail::sampled_cell_profile(f, std::numeric_limits<Scalar>::infinity()),
      OuterSpace::l2_log, Scalar(2));
  const Scalar g_side =
      outer_norm(detail::sampled_cell_profile(g, Scalar(4)), OuterSpace::lp_weak, Scalar(2));
  est.rhs = f_side * g_side;
  est.ratio = est.rhs > Scalar(0)
                  ? est.lhs / est.rhs
                  : (est.lhs == Scalar(0) ? Scalar(0) : std::numeric_limits<Scalar>::infinity());
  return est;
}

/// L2 mass of the counterexample profile f(t) = t^{-1/2} |log t|^{-1} on
/// (eps, 1/2): the closed form 1/log 2 - 1/|log eps|.
inline double counterexample_f_l2_sq(double eps) {
  if (!(eps > 0) || eps >= 0.5) throw std::invalid_argument("the cutoff must lie in (0, 1/2)");
  return 1.0 / std::log(2.0) - 1.0 / std::abs(std::log(eps));
}

/// Truncated lower-bound double integral of the counterexample,
/// int over {t >= 2s, t,s in (eps, 1/2)} of dt ds / (t s log^2 t). The inner
/// s-integral is log(t / 2eps); the outer integral runs by adaptive Simpson
/// in the variable u = -log t.
template <typename Scalar = double>
Scalar counterexample_double_integral(Scalar eps, Scalar tol = Scalar(1e-10)) {
  if (!(eps > 0) || eps >= Scalar(0.5))
    throw std::invalid_argument("the cutoff must lie in (0, 1/2)");
  const double big_u = -std::log(2.0 * static_cast<double>(eps));
  const double lo = std::log(2.0);
  if (big_u <= lo) return Scalar(0);
  const auto integrand = [big_u](double u) { return (big_u - u) / (u * u); };
  return static_cast<Scalar>(
      detail::adaptive_simpson(integrand, lo, big_u, static_cast<double>(tol)));
}

/// Schatten-4 fourth power of M_{f_eps} (1 - Laplacian)^{-1/4} on the N-point
/// unit-box grid, via sum sigma^4 = sum_{a,b} |f_a|^2 |f_b|^2 |c(a-b)|^2 with
/// c the difference kernel of |g|^2 = (1 + xi^2)^{-1/2}. The resolution
/// truncates the profile at max(eps, 1/N).
template <typename Scalar = double>
Scalar counterexample_schatten4_pow4(Scalar eps, long points) {
  if (!(eps > 0) || eps >= Scalar(0.5))
    throw std::invalid_argument("the cutoff must lie in (0, 1/2)");
  if (points < 4) throw std::invalid_argument("the grid needs at least 4 points");
  GridSpec<Scalar> grid(1, Scalar(1), points);
  const long n = points;
  std::vector<Scalar> f(n, 0);
  std::vector<long> support;
  for (long j = 0; j < n; ++j) {
    const Scalar t = grid.position(j)[0];
    if (t > eps && t < Scalar(0.5)) {
      f[j] = std::pow(t, Scalar(-0.5)) / std::abs(std::log(t));
      support.push_back(j);
    }
  }
  std::vector<Scalar> w(n);
  for (long k = 0; k < n; ++k) {
    const Scalar xi = grid.frequency(k)[0];
    w[k] = std::pow(Scalar(1) + xi * xi, Scalar(-0.5));
  }
  std::vector<std::complex<Scalar>> table(n);
  for (long q = 0; q < n; ++q) {
    const Scalar ang = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(q) / Scalar(n);
    table[q] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<std::complex<Scalar>> c(n, std::complex<Scalar>(0));
  for (long r = 0; r < n; ++r) {
    std::complex<Scalar> acc = 0;
    for (long k = 0; k < n; ++k) acc += w[k] * table[(k * r) % n];
    c[r] = acc / Scalar(n);
  }
  std::vector<Scalar> c_abs_sq(n);
  for (long r = 0; r < n; ++r) c_abs_sq[r] = std::norm(c[r]);
  Scalar total = 0;
  for (long a : support) {
    const Scalar fa2 = f[a] * f[a];
    for (long b : support) total += fa2 * f[b] * f[b] * c_abs_sq[((a - b) % n + n) % n];
  }
  return total;
}

template <typename Scalar = double>
struct CounterexampleRow {
  Scalar cutoff = 0;
  Scalar truncated_double_integral = 0;
  long grid_points = 0;
  Scalar truncated_schatten4_pow4 = 0;
};

/// Tabulates the two divergent quantities along paired (cutoff, grid) lists;
/// shorter lists are extended by repeating their last entry.
template <typename Scalar = double>
std::vector<CounterexampleRow<Scalar>> counterexample_scan(const std::vector<Scalar>& cutoffs,
                                                           const std::vector<long>& grids) {
  if (cutoffs.empty() || grids.empty())
    throw std::invalid_argument("the scan needs at least one cutoff and one grid");
  for (Scalar e : cutoffs)
    if (!(e > 0) || e >= Scalar(0.5))
      throw std::invalid_argument("the cutoff must lie in (0, 1/2)");
  const std::size_t rows = std::max(cutoffs.size(), grids.size());
  std::vector<CounterexampleRow<Scalar>> out;
  out.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    CounterexampleRow<Scalar> row;
    row.cutoff = cutoffs[std::min(i, cutoffs.size() - 1)];
    row.grid_points = grids[std::min(i, grids.size() - 1)];
    row.truncated_double_integral = counterexample_double_integral(row.cutoff);
    row.truncated_schatten4_pow4 = counterexample_schatten4_pow4(row.cutoff, row.grid_points);
    out.push_back(row);
  }
  return out;
}

}  // namespace mulab
