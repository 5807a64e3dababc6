#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mulab/dense_operator.hpp"
#include "mulab/lattice.hpp"
#include "mulab/majorization.hpp"
#include "mulab/step_function.hpp"

// Landau level kernels for the constant-field plane and the multiplier
// estimates built on them: the exact Hilbert-Schmidt identity per level, the
// spectral measure nu of the magnetic Laplacian, product bounds for
// f(x) g(-Delta_b), and a classical d=3 eigenvalue-counting experiment.

namespace mulab {

/// Laguerre polynomial L_n(u) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1-u) L_k - k L_{k-1}, L_0 = 1, L_1 = 1-u.
template <typename Scalar>
Scalar laguerre(int n, Scalar u) {
  if (n < 0) throw std::invalid_argument("laguerre: degree must be >= 0");
  Scalar prev = 1;
  if (n == 0) return prev;
  Scalar cur = 1 - u;
  for (int k = 1; k < n; ++k) {
    const Scalar next = ((Scalar(2 * k + 1) - u) * cur - Scalar(k) * prev) / Scalar(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Gauss-Laguerre rule for int_0^inf f(u) e^{-u} du, as (node, weight) pairs.
///
/// Golub-Welsch: the symmetrized Jacobi matrix of the Laguerre recurrence has
/// diagonal 2k+1 and off-diagonal k; eigenvalues are the nodes and the squared
/// first components of the normalized eigenvectors are the weights (the zeroth
/// moment is 1). Exact for polynomials of degree <= 2*nodes - 1.
template <typename Scalar = double>
std::vector<std::pair<Scalar, Scalar>> gauss_laguerre(int nodes) {
  if (nodes < 1 || nodes > 200)
    throw std::invalid_argument("gauss_laguerre: nodes must be in [1, 200]");
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat jacobi = Mat::Zero(nodes, nodes);
  for (int k = 0; k < nodes; ++k) {
    jacobi(k, k) = Scalar(2 * k + 1);
    if (k + 1 < nodes) {
      jacobi(k, k + 1) = Scalar(k + 1);
      jacobi(k + 1, k) = Scalar(k + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(jacobi);
  std::vector<std::pair<Scalar, Scalar>> rule(nodes);
  for (int i = 0; i < nodes; ++i) {
    const Scalar v0 = eig.eigenvectors()(0, i);
    rule[i] = {eig.eigenvalues()(i), v0 * v0};
  }
  return rule;
}

/// Quadrature setup for one field strength: a midpoint grid on [-R, R]^2 with
/// N points per axis (N even), resolving Landau levels up to max_level.
///
/// The squared level kernels ride the Gaussian envelope e^{-(b/2) r^2}, whose
/// mass outside radius R/2 is exp(-b R^2/8). The default radius 12/sqrt(b)
/// keeps that envelope tail at the 1e-8 scale independently of b; the
/// level-n profile decays later, see landau_tail_mass for the honest
/// per-level figure. The constructor does not impose a radius floor because
/// truncation experiments deliberately shrink R.
template <typename Scalar = double>
struct LandauSpec {
  Scalar field = 1;        // b > 0
  int max_level = 0;       // highest resolved Landau level
  int points_per_axis = 2; // N per axis, even
  Scalar radius = 12;      // half box side R

  LandauSpec(Scalar b, int n_max, int points, std::optional<Scalar> r = std::nullopt)
      : field(b), max_level(n_max), points_per_axis(points) {
    if (!(b > Scalar(0))) throw std::invalid_argument("landau spec: field must be positive");
    if (n_max < 0) throw std::invalid_argument("landau spec: max level must be >= 0");
    radius = r ? *r : Scalar(12) / std::sqrt(b);
    if (!(radius > Scalar(0))) throw std::invalid_argument("landau spec: radius must be positive");
    grid();  // reuses the grid validation (even N >= 2)
  }

  GridSpec<Scalar> grid() const {
    const Scalar h = Scalar(2) * radius / Scalar(points_per_axis);
    return GridSpec<Scalar>(2, Scalar(2) * radius, points_per_axis, -radius + h / Scalar(2));
  }

  /// Envelope mass outside radius R/2: exp(-b R^2 / 8).
  Scalar gaussian_tail() const { return std::exp(-field * radius * radius / Scalar(8)); }
};

/// Tail of the normalized level-n radial profile beyond radius R/2:
/// int_{u0}^inf L_n(u)^2 e^{-u} du with u0 = b R^2 / 8, evaluated exactly by
/// shifting a Gauss-Laguerre rule (the shifted integrand is a polynomial of
/// degree 2n against e^{-v}). The full integral over [0, inf) is 1.
template <typename Scalar>
Scalar landau_tail_mass(const LandauSpec<Scalar>& spec, int n) {
  if (n < 0) throw std::invalid_argument("landau_tail_mass: level must be >= 0");
  const Scalar u0 = spec.field * spec.radius * spec.radius / Scalar(8);
  Scalar acc = 0;
  for (const auto& [x, w] : gauss_laguerre<Scalar>(n + 2)) {
    const Scalar l = laguerre(n, u0 + x);
    acc += w * l * l;
  }
  return std::exp(-u0) * acc;
}

namespace detail {

/// Amplitude of the level kernel at squared separation q = |s - t|^2:
/// (b / 2 pi) L_n((b/2) q) e^{-(b/4) q}. The phase is supplied by the caller.
template <typename Scalar>
Scalar landau_radial(int n, Scalar b, Scalar q) {
  const Scalar norm = b / (Scalar(2) * std::numbers::pi_v<Scalar>);
  return norm * laguerre(n, b * q / Scalar(2)) * std::exp(-b * q / Scalar(4));
}

template <typename Scalar>
void check_landau_grid(const SampledFunction<Scalar>& f, const LandauSpec<Scalar>& spec,
                       const char* what) {
  if (f.domain != Domain::position)
    throw std::invalid_argument(std::string(what) + ": needs position-space samples");
  const auto g = spec.grid();
  const Scalar tol = Scalar(1e-9) * (Scalar(1) + std::abs(g.box_side));
  if (f.grid.dimension != 2 || f.grid.points_per_axis != g.points_per_axis ||
      std::abs(f.grid.box_side - g.box_side) > tol || std::abs(f.grid.origin - g.origin) > tol)
    throw std::invalid_argument(std::string(what) + ": samples do not live on the spec grid");
  if (f.values.size() != f.grid.total_points())
    throw std::invalid_argument(std::string(what) + ": sample count mismatch");
}

}  // namespace detail

/// Integral kernel of the Landau level projection P_n at field b:
///
///   K_n(s, t) = (b / 2 pi) L_n((b/2) |s-t|^2)
///               exp(-(b/4) |s-t|^2 + i (b/2) (t_1 s_2 - t_2 s_1)).
///
/// The phase coefficient scales with the field: composing two level kernels
/// reproduces the kernel only with coefficient b/2 (for b = 4 this reads
/// exp(2i (t_1 s_2 - t_2 s_1))). Hermitian: K_n(s, t) = conj(K_n(t, s)).
template <typename Scalar>
std::complex<Scalar> landau_kernel(int n, Scalar b, const std::vector<Scalar>& s,
                                   const std::vector<Scalar>& t) {
  if (n < 0) throw std::invalid_argument("landau_kernel: level must be >= 0");
  if (!(b > Scalar(0))) throw std::invalid_argument("landau_kernel: field must be positive");
  if (s.size() != 2 || t.size() != 2)
    throw std::invalid_argument("landau_kernel: points must be planar");
  const Scalar d0 = s[0] - t[0];
  const Scalar d1 = s[1] - t[1];
  const Scalar amp = detail::landau_radial(n, b, d0 * d0 + d1 * d1);
  const Scalar phase = b / Scalar(2) * (t[0] * s[1] - t[1] * s[0]);
  return amp * std::complex<Scalar>(std::cos(phase), std::sin(phase));
}

/// Discretized projection P_n on the spec grid: the kernel matrix with cell
/// weight h^4 (one h^2 per kernel leg). Dense; refuses grids past 1600 points.
template <typename Scalar>
DenseOperator<Scalar> landau_projection(int n, const LandauSpec<Scalar>& spec) {
  if (n < 0 || n > spec.max_level)
    throw std::invalid_argument("landau_projection: level outside spec range");
  const auto grid = spec.grid();
  const long total = grid.total_points();
  if (total > 1600)
    throw std::invalid_argument("landau_projection: grid too large for a dense kernel");
  DenseOperator<Scalar> op;
  const Scalar cv = grid.cell_volume();
  op.cell_weight = cv * cv;
  op.entries.resize(total, total);
  for (long i = 0; i < total; ++i) {
    const auto s = grid.position(i);
    op.entries(i, i) = landau_kernel(n, spec.field, s, s);
    for (long j = i + 1; j < total; ++j) {
      const auto v = landau_kernel(n, spec.field, s, grid.position(j));
      op.entries(i, j) = v;
      op.entries(j, i) = std::conj(v);
    }
  }
  return op;
}

/// Idempotency defect of the discretized projection: the kernel of P_n P_n
/// (composition weight h^2) minus the kernel of P_n, in relative Frobenius
/// norm. Tends to zero as the quadrature resolves the kernel and the box
/// captures its Gaussian tail.
template <typename Scalar>
Scalar projection_residual(int n, const LandauSpec<Scalar>& spec) {
  const auto op = landau_projection(n, spec);
  const Scalar cv = spec.grid().cell_volume();
  const typename DenseOperator<Scalar>::Matrix composed = cv * (op.entries * op.entries);
  return (composed - op.entries).norm() / op.entries.norm();
}

/// Normalized cross-level overlap |P_n P_m|_HS / (|P_n|_HS |P_m|_HS), a
/// Cauchy-Schwarz cosine in [0, 1]; distinct levels are orthogonal in the
/// continuum, so this measures pure discretization error.
template <typename Scalar>
Scalar cross_level_overlap(int n, int m, const LandauSpec<Scalar>& spec) {
  const auto a = landau_projection(n, spec);
  const auto b = landau_projection(m, spec);
  return (a.entries * b.entries).norm() / (a.entries.norm() * b.entries.norm());
}

template <typename Scalar = double>
struct MagneticHs {
  Scalar computed = 0;
  Scalar claimed = 0;
};

/// Hilbert-Schmidt norm of M_f P_n against the exact level identity
/// |M_f P_n|_2 = sqrt(b / 2 pi) |f|_2.
///
/// The kernel modulus |f(s) K_n(s, t)| depends on t only through |s - t|, so
/// the 4-d squared integral factors into |f|_2^2 times the radial profile
/// integral; `computed` evaluates that profile by 2-d midpoint quadrature
/// over the spec box, `claimed` is the closed form with the same |f|_2.
template <typename Scalar>
MagneticHs<Scalar> mf_pn_hs(const SampledFunction<Scalar>& f, int n,
                            const LandauSpec<Scalar>& spec) {
  if (n < 0 || n > spec.max_level)
    throw std::invalid_argument("mf_pn_hs: level outside spec range");
  detail::check_landau_grid(f, spec, "mf_pn_hs");
  const auto grid = spec.grid();
  Scalar profile = 0;
  for (long i = 0; i < grid.total_points(); ++i) {
    const auto u = grid.position(i);
    const Scalar amp = detail::landau_radial(n, spec.field, u[0] * u[0] + u[1] * u[1]);
    profile += amp * amp;
  }
  profile *= grid.cell_volume();
  const Scalar fl2 = f.l2_norm();
  MagneticHs<Scalar> out;
  out.computed = fl2 * std::sqrt(profile);
  out.claimed = std::sqrt(spec.field / (Scalar(2) * std::numbers::pi_v<Scalar>)) * fl2;
  return out;
}

/// Function on the spectrum of -Delta_b: values g(b(2n+1)) for n = 0..n_max.
/// The spectral measure nu puts weight 2b on each atom b(2n+1).
template <typename Scalar = double>
struct NuFunction {
  Scalar field = 1;
  std::vector<std::complex<Scalar>> values;

  NuFunction(Scalar b, std::vector<std::complex<Scalar>> v)
      : field(b), values(std::move(v)) {
    if (!(b > Scalar(0))) throw std::invalid_argument("nu function: field must be positive");
  }

  Scalar atom(int n) const { return field * Scalar(2 * n + 1); }

  /// L_2(nu) norm: sqrt(2b sum |g_n|^2).
  Scalar l2_norm() const {
    Scalar acc = 0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(Scalar(2) * field * acc);
  }
};

template <typename Scalar, typename Fn>
NuFunction<Scalar> sample_nu(Scalar b, int n_max, Fn&& g) {
  if (n_max < 0) throw std::invalid_argument("sample_nu: max level must be >= 0");
  std::vector<std::complex<Scalar>> v(n_max + 1);
  for (int n = 0; n <= n_max; ++n) v[n] = g(b * Scalar(2 * n + 1));
  return NuFunction<Scalar>(b, std::move(v));
}

/// Decreasing rearrangement of g against nu: step function of the |g_n| with
/// width 2b per atom.
template <typename Scalar>
StepFunction<Scalar> nu_rearrangement(const NuFunction<Scalar>& g) {
  std::vector<std::pair<Scalar, Scalar>> samples;
  samples.reserve(g.values.size());
  for (const auto& v : g.values) samples.emplace_back(std::abs(v), Scalar(2) * g.field);
  return decreasing_rearrangement(std::move(samples));
}

/// L_p(nu) norm of g, or the weak L_{p,inf}(nu) quasinorm. A single atom of
/// height c has norm (2b)^{1/p} c in both flavors.
template <typename Scalar>
Scalar nu_norm(const NuFunction<Scalar>& g, Scalar p, bool weak = false) {
  if (!(p > Scalar(0))) throw std::invalid_argument("nu_norm: p must be positive");
  const auto mu = nu_rearrangement(g);
  return weak ? lorentz_quasinorm(mu, p) : schatten_norm(mu, p);
}

enum class MagneticFlavor { hilbert_schmidt, schatten, weak };

template <typename Scalar = double>
struct MagneticCwikel {
  Scalar lhs = 0;
  Scalar rhs = 0;
  Scalar ratio() const { return rhs == Scalar(0) ? Scalar(0) : lhs / rhs; }
};

/// Norms of M_f g(-Delta_b) = sum_n g_n M_f P_n on the spec grid.
///
/// hilbert_schmidt: lhs is the exact streamed HS norm (the levels share one
/// phase, so the kernel modulus is radial in s - t and no matrix is formed);
/// rhs is (4 pi)^{-1/2} |f|_2 |g|_{L_2(nu)}. With the nu weight 2b per atom
/// this constant makes a single-level g reduce exactly to the level identity
/// of mf_pn_hs.
///
/// schatten (p >= 2) and weak (p > 2): lhs is the Schatten / weak Schatten
/// quasinorm of the dense kernel matrix (grid capped at 1600 points); rhs is
/// the same functional of the tensor rearrangement mu(f) (x) mu_nu(g), the
/// shape the interpolation bound controls. No constant is applied, so the
/// ratio is the observed one.
template <typename Scalar>
MagneticCwikel<Scalar> magnetic_cwikel(const SampledFunction<Scalar>& f,
                                       const NuFunction<Scalar>& g,
                                       const LandauSpec<Scalar>& spec, MagneticFlavor flavor,
                                       Scalar p = 2) {
  detail::check_landau_grid(f, spec, "magnetic_cwikel");
  if (std::abs(g.field - spec.field) > Scalar(1e-9) * (Scalar(1) + std::abs(spec.field)))
    throw std::invalid_argument("magnetic_cwikel: nu function carries a different field");
  if (static_cast<int>(g.values.size()) > spec.max_level + 1)
    throw std::invalid_argument("magnetic_cwikel: spec resolves fewer levels than g carries");
  const auto grid = spec.grid();
  const long n = grid.points_per_axis;
  const Scalar h = grid.spacing();
  const Scalar cv = grid.cell_volume();
  const Scalar b = spec.field;
  const int levels = static_cast<int>(g.values.size());
  const Scalar norm = b / (Scalar(2) * std::numbers::pi_v<Scalar>);

  MagneticCwikel<Scalar> out;

  if (flavor == MagneticFlavor::hilbert_schmidt) {
    // Radial profile |sum_n g_n K_n|^2 tabulated over integer squared
    // distances; the window cut drops separations whose profile is below
    // 1e-26 of the peak.
    const long qmax = 2 * (n - 1) * (n - 1);
    std::vector<Scalar> profile(qmax + 1);
    Scalar peak = 0;
    for (long q = 0; q <= qmax; ++q) {
      const Scalar sep = Scalar(q) * h * h;
      std::complex<Scalar> radial(0, 0);
      for (int lvl = 0; lvl < levels; ++lvl)
        radial += g.values[lvl] * laguerre(lvl, b * sep / Scalar(2));
      profile[q] = norm * norm * std::norm(radial) * std::exp(-b * sep / Scalar(2));
      peak = std::max(peak, profile[q]);
    }
    long qcut = qmax;
    while (qcut > 0 && profile[qcut] < peak * Scalar(1e-26)) --qcut;
    const long rlim = static_cast<long>(std::sqrt(Scalar(qcut))) + 1;
    Scalar acc = 0;
    for (long i = 0; i < grid.total_points(); ++i) {
      const Scalar fs = std::norm(f.values(i));
      if (fs == Scalar(0)) continue;
      const long i0 = i / n, i1 = i % n;
      Scalar w = 0;
      const long alo = std::max(i0 - n + 1, -rlim), ahi = std::min(i0, rlim);
      const long blo = std::max(i1 - n + 1, -rlim), bhi = std::min(i1, rlim);
      for (long a = alo; a <= ahi; ++a) {
        const long qa = a * a;
        if (qa > qcut) continue;
        for (long c = blo; c <= bhi; ++c) {
          const long q = qa + c * c;
          if (q <= qcut) w += profile[q];
        }
      }
      acc += fs * w;
    }
    out.lhs = cv * std::sqrt(acc);  // cv = h^2, one factor per kernel leg
    out.rhs = f.l2_norm() * g.l2_norm() /
              std::sqrt(Scalar(4) * std::numbers::pi_v<Scalar>);
    return out;
  }

  if (flavor == MagneticFlavor::schatten) {
    if (!(p >= Scalar(2))) throw std::invalid_argument("magnetic_cwikel: schatten needs p >= 2");
  } else {
    if (!(p > Scalar(2))) throw std::invalid_argument("magnetic_cwikel: weak needs p > 2");
  }
  const long total = grid.total_points();
  if (total > 1600)
    throw std::invalid_argument("magnetic_cwikel: grid too large for a dense kernel");

  DenseOperator<Scalar> op;
  op.cell_weight = cv * cv;
  op.entries.resize(total, total);
  for (long i = 0; i < total; ++i) {
    const auto s = grid.position(i);
    for (long j = 0; j < total; ++j) {
      const auto t = grid.position(j);
      const Scalar d0 = s[0] - t[0], d1 = s[1] - t[1];
      const Scalar q = d0 * d0 + d1 * d1;
      std::complex<Scalar> radial(0, 0);
      for (int lvl = 0; lvl < levels; ++lvl)
        radial += g.values[lvl] * laguerre(lvl, b * q / Scalar(2));
      radial *= norm * std::exp(-b * q / Scalar(4));
      const Scalar phase = b / Scalar(2) * (t[0] * s[1] - t[1] * s[0]);
      op.entries(i, j) =
          f.values(i) * radial * std::complex<Scalar>(std::cos(phase), std::sin(phase));
    }
  }
  const auto mu = singular_step(op, Scalar(1));

  std::vector<std::pair<Scalar, Scalar>> fs;
  fs.reserve(total);
  for (long i = 0; i < total; ++i) fs.emplace_back(std::abs(f.values(i)), cv);
  const auto shape = tensor_rearrangement(decreasing_rearrangement(std::move(fs)),
                                          nu_rearrangement(g));
  if (flavor == MagneticFlavor::schatten) {
    out.lhs = schatten_norm(mu, p);
    out.rhs = schatten_norm(shape, p);
  } else {
    out.lhs = lorentz_quasinorm(mu, p);
    out.rhs = lorentz_quasinorm(shape, p);
  }
  return out;
}

template <typename Scalar = double>
struct ClrCount {
  long negative_count = 0;
  Scalar bound_quantity = 0;  // int |V_-|^{3/2}
};

/// Negative bound states of -Delta + V on a d=3 box (7-point stencil,
/// Dirichlet walls, dense eigensolve) next to the semiclassical quantity
/// int |V_-|^{3/2}. The ratio is recorded, not asserted: no sharp constant
/// is evaluated here.
template <typename Scalar>
ClrCount<Scalar> clr_count(const SampledFunction<Scalar>& potential) {
  if (potential.domain != Domain::position)
    throw std::invalid_argument("clr_count: needs position-space samples");
  const auto& grid = potential.grid;
  if (grid.dimension != 3) throw std::invalid_argument("clr_count: potential must be d=3");
  const long total = grid.total_points();
  if (total > 2000)
    throw std::invalid_argument("clr_count: grid too large for a dense eigensolve");
  if (potential.values.size() != total)
    throw std::invalid_argument("clr_count: sample count mismatch");
  Scalar vmax = 0;
  for (long i = 0; i < total; ++i) vmax = std::max(vmax, std::abs(potential.values(i).real()));
  for (long i = 0; i < total; ++i)
    if (std::abs(potential.values(i).imag()) > Scalar(1e-9) * (Scalar(1) + vmax))
      throw std::invalid_argument("clr_count: potential must be real");

  const long n = grid.points_per_axis;
  const Scalar h = grid.spacing();
  const Scalar inv_h2 = Scalar(1) / (h * h);
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat ham = Mat::Zero(total, total);
  const long strides[3] = {n * n, n, 1};
  for (long i = 0; i < total; ++i) {
    ham(i, i) = Scalar(6) * inv_h2 + potential.values(i).real();
    const auto m = grid.index_to_multi(i);
    for (int ax = 0; ax < 3; ++ax)
      if (m[ax] + 1 < n) {
        const long j = i + strides[ax];
        ham(i, j) = -inv_h2;
        ham(j, i) = -inv_h2;
      }
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(ham, Eigen::EigenvaluesOnly);
  const Scalar scale = std::max(std::abs(eig.eigenvalues()(0)),
                                std::abs(eig.eigenvalues()(total - 1)));
  const Scalar cut = -Scalar(1e-12) * std::max(Scalar(1), scale);

  ClrCount<Scalar> out;
  for (long i = 0; i < total; ++i)
    if (eig.eigenvalues()(i) < cut) ++out.negative_count;
  Scalar acc = 0;
  for (long i = 0; i < total; ++i) {
    const Scalar neg = std::max(-potential.values(i).real(), Scalar(0));
    acc += neg * std::sqrt(neg);
  }
  out.bound_quantity = grid.cell_volume() * acc;
  return out;
}

}  // namespace mulab
