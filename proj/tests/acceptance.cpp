// Acceptance battery: one line per criterion, pinned tolerances, nonzero
// exit when anything fails. Each criterion re-derives its own data so the
// binary stands alone; the runtime caps are generous on a laptop core.

#include <Eigen/Dense>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "mulab/cwikel.hpp"
#include "mulab/dense_operator.hpp"
#include "mulab/lattice.hpp"
#include "mulab/logconvex.hpp"
#include "mulab/magnetic.hpp"
#include "mulab/majorization.hpp"
#include "mulab/moyal.hpp"
#include "mulab/reports.hpp"
#include "mulab/rng.hpp"
#include "mulab/step_function.hpp"

using namespace mulab;
using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace {

int failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail,
            double seconds, double budget) {
  const bool in_budget = seconds <= budget;
  if (!pass || !in_budget) ++failures;
  std::printf("[%s] criterion %2d %-24s %s (%.1f s of %.0f s)\n",
              pass && in_budget ? "PASS" : "FAIL", number, name, detail.c_str(), seconds,
              budget);
  std::fflush(stdout);
}

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double bump(double u) {
  const double a = std::abs(u);
  return a < 1.0 ? std::exp(-1.0 / (1.0 - a * a)) * std::numbers::e : 0.0;
}

SampledFunction<double> bump_profile(const GridSpec<double>& grid, Domain dom, CounterRng& rng,
                                     int bumps, double lo, double hi, double amp,
                                     bool complex_phase = false) {
  SampledFunction<double> f{grid, {}, dom};
  f.values = CVec::Zero(grid.total_points());
  for (int b = 0; b < bumps; ++b) {
    const double center = rng.uniform(lo, hi);
    const double width = 0.05 * (hi - lo) + rng.uniform(0.0, 0.2 * (hi - lo));
    const double c = amp * (0.2 + rng.uniform(0.0, 1.0));
    const double phase = complex_phase ? rng.uniform(0.0, 2 * std::numbers::pi) : 0.0;
    for (long i = 0; i < grid.total_points(); ++i) {
      const double x = dom == Domain::position ? grid.position(i)[0] : grid.frequency(i)[0];
      const double v = c * bump((x - center) / width);
      if (v != 0.0) f.values(i) += v * Cplx(std::cos(phase), std::sin(phase));
    }
  }
  return f;
}

Symbol<double> gaussian_symbol(const GridSpec<double>& grid, std::array<double, 2> center,
                               double sigma, std::array<double, 2> wave = {0, 0}) {
  return sample_symbol<double>(grid, [=](const std::vector<double>& s) {
    const double q = (s[0] - center[0]) * (s[0] - center[0]) +
                     (s[1] - center[1]) * (s[1] - center[1]);
    return std::polar(std::exp(-q / (2 * sigma * sigma)), wave[0] * s[0] + wave[1] * s[1]);
  });
}

SampledFunction<double> gaussian_on(const GridSpec<double>& grid, double cx, double cy,
                                    double sigma) {
  return sample_position<double>(grid, [&](const std::vector<double>& x) {
    const double dx = x[0] - cx, dy = x[1] - cy;
    return Cplx(std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)), 0.0);
  });
}

Mat random_matrix(CounterRng& rng, int r, int c) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Cplx(rng.normal(), rng.normal());
  return m;
}

StepFunction<> random_step(CounterRng& rng, int max_segments) {
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_segments)));
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < n; ++i)
    samples.emplace_back(0.05 + rng.uniform(0.0, 4.0), 0.1 + rng.uniform(0.0, 2.0));
  return decreasing_rearrangement(samples);
}

std::vector<std::size_t> random_blocks(CounterRng& rng, std::size_t total) {
  std::vector<std::size_t> blocks;
  std::size_t used = 0;
  while (used < total) {
    const std::size_t b = 1 + rng.below(std::min<std::uint64_t>(3, total - used));
    blocks.push_back(b);
    used += b;
  }
  return blocks;
}

// Interior-supported random symbol: modulated Gaussians well inside the box.
Symbol<double> interior_symbol(CounterRng& rng, const GridSpec<double>& grid) {
  Symbol<double> out(grid, CVec::Zero(grid.total_points()));
  for (int b = 0; b < 3; ++b) {
    const std::array<double, 2> c = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const std::array<double, 2> wave = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const Cplx amp(rng.normal(), rng.normal());
    out.values += amp * gaussian_symbol(grid, c, rng.uniform(0.8, 1.2), wave).values;
  }
  return out;
}

// --- criterion 1: quantization isometry -----------------------------------

void criterion_quantization() {
  const auto start = std::chrono::steady_clock::now();
  CounterRng rng(2026, 201);
  double worst256 = 0, worst512 = 0;
  bool all_small = true;
  for (int trial = 0; trial < 20; ++trial) {
    // One analytic profile per trial, sampled at both resolutions on the
    // self-dual box (which widens with N). Narrow bumps modulated to sit
    // near the N=256 frequency window leave measurable truncation error
    // there, so the refinement to N=512 has something real to resolve.
    struct Bump {
      std::array<double, 2> c, wave;
      double sigma;
      Cplx amp;
    };
    std::array<Bump, 2> bumps;
    for (auto& b : bumps) {
      b.c = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const double mag = rng.uniform(7.0, 11.5);
      const double ang = rng.uniform(0.0, 2 * std::numbers::pi);
      b.wave = {mag * std::cos(ang), mag * std::sin(ang)};
      b.sigma = rng.uniform(0.24, 0.26);
      b.amp = Cplx(rng.normal(), rng.normal());
    }
    double err256 = 0;
    for (int n : {256, 512}) {
      const auto grid = self_dual_grid<double>(2, n, true);
      Symbol<double> f(grid, CVec::Zero(grid.total_points()));
      for (const auto& b : bumps)
        f.values += b.amp * gaussian_symbol(grid, b.c, b.sigma, b.wave).values;
      const double tau = tau_schatten_norm(f, 2.0);
      const double l2 = f.l2_norm();
      const double err = std::abs(tau - l2) / l2;
      if (n == 256) {
        err256 = err;
        worst256 = std::max(worst256, err);
        if (err > 1e-3) all_small = false;
      } else {
        worst512 = std::max(worst512, err);
        // per-symbol refinement: 0.6x ratio, or converged to roundoff
        if (!(err <= 0.6 * err256 || err <= 1e-9)) all_small = false;
      }
    }
  }
  const bool ratio_ok = worst512 <= 0.6 * worst256 || worst512 <= 1e-9;
  report(1, "quantization-isometry", all_small && ratio_ok,
         "max err " + format_significant(worst256, 3) + " at N=256, " +
             format_significant(worst512, 3) + " at N=512",
         now_seconds(start), 60);
}

// --- criterion 2: Moyal HS identity ----------------------------------------

void criterion_moyal_hs() {
  const auto start = std::chrono::steady_clock::now();
  CounterRng rng(2026, 202);
  const GridSpec<double> grid(2, 16.0, 128, -8.0);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = interior_symbol(rng, grid);
    const auto g = gaussian_on(grid, rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                               rng.uniform(0.8, 1.6));
    worst = std::max(worst, std::abs(moyal_hs_identity(f, g).ratio - 1.0));
  }
  report(2, "moyal-hs-identity", worst <= 1e-3,
         "max relative error " + format_significant(worst, 3) + " over 50 pairs",
         now_seconds(start), 60);
}

// --- criterion 3: magnetic HS identities -----------------------------------

void criterion_magnetic_hs() {
  const auto start = std::chrono::steady_clock::now();
  double worst_level = 0;
  for (double b : {0.5, 1.0, 2.0}) {
    const LandauSpec<double> spec(b, 3, 128);
    const auto f = gaussian_on(spec.grid(), 0.4, -0.3, 1.0);
    for (int n = 0; n <= 3; ++n) {
      const auto r = mf_pn_hs(f, n, spec);
      worst_level = std::max(worst_level, std::abs(r.computed - r.claimed) / r.claimed);
    }
  }

  CounterRng rng(2026, 203);
  const LandauSpec<double> spec(1.0, 4, 96);
  const auto f = gaussian_on(spec.grid(), -0.4, 0.5, 1.2);
  std::vector<Cplx> vals;
  for (int n = 0; n < 5; ++n) vals.emplace_back(rng.normal(), rng.normal());
  const auto hs = magnetic_cwikel(f, NuFunction<double>(1.0, vals), spec,
                                  MagneticFlavor::hilbert_schmidt);
  const double product_err = std::abs(hs.ratio() - 1.0);

  double worst_ortho = 0;
  const auto rule = gauss_laguerre<double>(20);
  for (int n = 0; n <= 6; ++n)
    for (int m = 0; m <= 6; ++m) {
      double acc = 0;
      for (const auto& [node, weight] : rule) acc += weight * laguerre(n, node) * laguerre(m, node);
      worst_ortho = std::max(worst_ortho, std::abs(acc - (n == m ? 1.0 : 0.0)));
    }

  report(3, "magnetic-hs-identities",
         worst_level <= 5e-3 && product_err <= 5e-3 && worst_ortho <= 1e-8,
         "level err " + format_significant(worst_level, 3) + ", product err " +
             format_significant(product_err, 3) + ", orthonormality " +
             format_significant(worst_ortho, 3),
         now_seconds(start), 120);
}

// --- criteria 4 and 5: the 532 constant and the dyadic split ---------------

void criteria_submajorization_and_split() {
  const auto start4 = std::chrono::steady_clock::now();
  const auto grid = self_dual_grid<double>(1, 128);
  CounterRng rng(2026, 204);

  std::vector<SampledFunction<double>> fs, gs;
  double worst = 0;
  long violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    fs.push_back(bump_profile(grid, Domain::position, rng, 3, 0.5, grid.box_side - 0.5, 4.0));
    gs.push_back(bump_profile(grid, Domain::frequency, rng, 3, -5.0, 5.0, 4.0));
    const auto verdict = check_submajorization_532(fs.back(), gs.back());
    if (!verdict.holds) ++violations;
    worst = std::max(worst, verdict.observed_constant);
  }

  long cell_violations = 0;
  for (int sf = 0; sf < 5; ++sf)
    for (int sg = 0; sg < 4; ++sg) {
      const double af = sf, ag = sg - 2.0;
      const auto fc = sample_position<double>(grid, [&](const std::vector<double>& x) {
        return (x[0] >= af && x[0] < af + 1.0) ? Cplx(1, 0) : Cplx(0, 0);
      });
      const auto gc = sample_frequency<double>(grid, [&](const std::vector<double>& xi) {
        return (xi[0] >= ag && xi[0] < ag + 1.0) ? Cplx(1, 0) : Cplx(0, 0);
      });
      if (!check_submajorization_532(fc, gc, 130.0).holds) ++cell_violations;
    }
  report(4, "submajorization-532", violations == 0 && cell_violations == 0 && worst <= 532.0,
         "max constant " + format_significant(worst, 3) + ", violations " +
             std::to_string(violations) + ", cell violations " + std::to_string(cell_violations),
         now_seconds(start4), 300);

  const auto start5 = std::chrono::steady_clock::now();
  double max_residual = 0;
  long bound_violations = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto full = classical_product(fs[i], gs[i]);
    const double scale = std::max(full.entries.norm(), 1e-300);
    for (int level : {-1, 0, 2}) {
      const auto split = an_bn_split(fs[i], gs[i], level);
      max_residual = std::max(
          max_residual,
          (split.a_part.entries + split.b_part.entries - full.entries).norm() / scale);
      if (split.a_uniform_norm > split.a_uniform_cap() * (1 + 1e-9)) ++bound_violations;
      if (split.b_hs_sq > split.tensor_tail_hs_sq * (1 + 1e-12) + 1e-300) ++bound_violations;
    }
  }
  report(5, "dyadic-split-bounds", max_residual <= 1e-10 && bound_violations == 0,
         "max residual " + format_significant(max_residual, 3) + ", bound violations " +
             std::to_string(bound_violations),
         now_seconds(start5), 300);
}

// --- criterion 6: log-convexity ---------------------------------------------

void criterion_logconvex() {
  const auto start = std::chrono::steady_clock::now();
  CounterRng rng(2026, 206);
  long violations = 0;
  const auto check_point = [&](const SimplexPoint<double>& pt) {
    const auto [lhs, rhs] = entropy_lagrange_check(pt);
    if (lhs > rhs * (1 + 1e-12) + 1e-12) ++violations;
  };
  for (long t = 0; t < 100000; ++t)
    check_point(SimplexPoint<double>{rng.dirichlet(2 + static_cast<int>(rng.below(63)))});
  for (int n = 2; n <= 8; ++n)
    for (int i = 0; i < n; ++i) {
      std::vector<double> vertex(n, 0.0);
      vertex[i] = 1.0;
      check_point(SimplexPoint<double>{vertex});
      for (int j = i + 1; j < n; ++j) {
        std::vector<double> mid(n, 0.0);
        mid[i] = mid[j] = 0.5;
        check_point(SimplexPoint<double>{mid});
      }
    }

  long tri_violations = 0;
  for (int t = 0; t < 500; ++t) {
    const int count = 2 + static_cast<int>(rng.below(5));
    const int dim = 3 + static_cast<int>(rng.below(6));
    std::vector<DenseOperator<double>> xs;
    for (int k = 0; k < count; ++k)
      xs.push_back(
          DenseOperator<double>{(0.2 + rng.uniform(0.0, 2.0)) * random_matrix(rng, dim, dim), 1.0});
    const auto pair = weak_l1_log_triangle(xs);
    if (pair.lhs > pair.rhs_sorted * (1 + 1e-12) + 1e-12) ++tri_violations;
  }
  report(6, "log-convexity", violations == 0 && tri_violations == 0,
         std::to_string(violations) + " simplex violations, " + std::to_string(tri_violations) +
             " triangle violations",
         now_seconds(start), 60);
}

// --- criterion 7: the counterexample family ---------------------------------

void criterion_counterexample() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> cutoffs = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};

  bool integral_increasing = true;
  double prev = 0;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    const double value = counterexample_double_integral(cutoffs[i]);
    if (i > 0 && value <= prev) integral_increasing = false;
    prev = value;
  }

  bool schatten_increasing = true;
  double prev_s = 0;
  for (long n : {256L, 512L, 1024L, 2048L, 4096L}) {
    const double value = counterexample_schatten4_pow4(1e-4, n);
    if (n > 256 && value <= prev_s) schatten_increasing = false;
    prev_s = value;
  }

  const double limit = 1.0 / std::log(2.0);
  bool mass_increasing = true;
  double prev_m = 0;
  for (double eps : cutoffs) {
    const double mass = counterexample_f_l2_sq(eps);
    if (mass <= prev_m) mass_increasing = false;
    prev_m = mass;
  }
  const double increment =
      (counterexample_f_l2_sq(1e-10) - counterexample_f_l2_sq(1e-8)) / limit;
  const double gap = (limit - counterexample_f_l2_sq(1e-10)) / limit;

  report(7, "counterexample-family",
         integral_increasing && schatten_increasing && mass_increasing && increment < 0.01,
         "integral and schatten scans strict, last mass step " +
             format_significant(100 * increment, 3) + "% of the limit (gap " +
             format_significant(100 * gap, 3) + "% recorded)",
         now_seconds(start), 120);
}

// --- criterion 8: small-p Cwikel --------------------------------------------

void criterion_small_p() {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec<double> grid(1, 4.0, 32);
  CounterRng rng(2026, 208);

  bool stable = true, finite = true;
  double worst_drift = 0;
  for (double p : {1.0, 1.5}) {
    for (auto flavor : {CwikelFlavor::strong, CwikelFlavor::weak}) {
      double sup30 = 0, sup50 = 0;
      for (int trial = 0; trial < 50; ++trial) {
        // five bumps per side keep each draw close to a typical profile,
        // so the running sup saturates well before instance 30
        const auto f = bump_profile(grid, Domain::position, rng, 5, 0.2, 3.8, 3.0, true);
        const auto g = bump_profile(grid, Domain::frequency, rng, 5, -6.0, 6.0, 3.0, true);
        const auto est = cwikel_small_p(f, g, p, flavor);
        if (!std::isfinite(est.ratio)) finite = false;
        if (trial < 30) sup30 = std::max(sup30, est.ratio);
        sup50 = std::max(sup50, est.ratio);
      }
      const double drift = sup50 > 0 ? (sup50 - sup30) / sup50 : 1.0;
      worst_drift = std::max(worst_drift, drift);
      if (!(sup50 > 0) || drift >= 0.05) stable = false;
    }
  }

  const auto f1 = sample_position<double>(grid, [](const std::vector<double>& x) {
    return x[0] < 1.0 ? Cplx(0.3 + x[0], 0) : Cplx(0, 0);
  });
  const auto g1 = sample_frequency<double>(grid, [](const std::vector<double>& xi) {
    return (xi[0] >= 0 && xi[0] < 1.0) ? Cplx(1.0 + xi[0], 0) : Cplx(0, 0);
  });
  double cell_err = 0;
  for (double p : {1.0, 1.5}) {
    const auto est = cwikel_small_p(f1, g1, p, CwikelFlavor::strong);
    const double reference = compact_support_ratio(f1, g1, p);
    cell_err = std::max(cell_err, std::abs(est.ratio - reference) / reference);
  }

  std::string detail = "worst running-sup drift " + format_significant(worst_drift, 3) +
                       ", single-cell deviation " + format_significant(cell_err, 3);
  if (!finite) detail += ", non-finite ratio seen";
  report(8, "small-p-cwikel", stable && finite && cell_err <= 1e-12, detail,
         now_seconds(start), 300);
}

// --- criterion 9: core invariants -------------------------------------------

void criterion_core_invariants() {
  const auto start = std::chrono::steady_clock::now();
  CounterRng rng(2026, 209);
  long violations = 0;

  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng.below(8));
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i < n; ++i)
      samples.emplace_back(rng.uniform(-4.0, 4.0), 0.1 + rng.uniform(0.0, 2.0));
    const auto f = decreasing_rearrangement(samples);
    auto oracle = samples;
    for (auto& s : oracle) s.first = std::abs(s.first);
    std::sort(oracle.begin(), oracle.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto& segs = f.segments();
    bool ok = segs.size() == oracle.size();
    for (std::size_t i = 0; ok && i < segs.size(); ++i)
      ok = segs[i].value == oracle[i].first && segs[i].width == oracle[i].second;
    if (!ok) ++violations;
  }

  for (int t = 0; t < 1000; ++t) {
    const Mat a = random_matrix(rng, 10, 10);
    const Mat b = random_matrix(rng, 10, 10);
    const auto fa = singular_step(DenseOperator<double>{a, 1.0}, 1.0);
    const auto fb = singular_step(DenseOperator<double>{b, 1.0}, 1.0);
    const auto fab = singular_step(DenseOperator<double>{a + b, 1.0}, 1.0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        if (fab.value_at(i + j + 0.5) > fa.value_at(i + 0.25) + fb.value_at(j + 0.25) + 1e-10)
          ++violations;
  }

  for (int t = 0; t < 1000; ++t) {
    const auto g = random_step(rng, 8);
    const auto f = segment_block_average(g, random_blocks(rng, g.segments().size()));
    if (!majorizes(g, f, 1e-9).holds) ++violations;
  }

  for (int t = 0; t < 1000; ++t) {
    const auto y = random_step(rng, 10);
    const auto sq_x = segment_block_average(power(y, 2.0),
                                            random_blocks(rng, power(y, 2.0).segments().size()));
    const auto x = power(sq_x, 0.5);
    for (double p : {0.5, 1.0, 1.5})
      if (schatten_norm(y, p) > schatten_norm(x, p) * (1 + 1e-10)) ++violations;
  }

  for (int t = 0; t < 1000; ++t) {
    const auto f = random_step(rng, 6);
    const auto g = random_step(rng, 6);
    const auto tensor = tensor_rearrangement(f, g);
    for (double p : {1.0, 2.0})
      if (lorentz_quasinorm(tensor, p) > schatten_norm(f, p) * lorentz_quasinorm(g, p) * (1 + 1e-10))
        ++violations;
  }

  report(9, "core-invariants", violations == 0,
         std::to_string(violations) + " violations across the randomized trials",
         now_seconds(start), 60);
}

// --- criterion 10: determinism ----------------------------------------------

void criterion_determinism() {
  const auto start = std::chrono::steady_clock::now();
  RunConfig config;
  config.selection = {"all"};
  const auto csv_a = emit_csv(run(config));
  const auto csv_b = emit_csv(run(config));
  report(10, "determinism", !csv_a.empty() && csv_a == csv_b,
         csv_a == csv_b ? "two full default runs emit identical CSV bytes"
                        : "CSV bytes differ between runs",
         now_seconds(start), 900);
}

}  // namespace

int main() {
  criterion_quantization();
  criterion_moyal_hs();
  criterion_magnetic_hs();
  criteria_submajorization_and_split();
  criterion_logconvex();
  criterion_counterexample();
  criterion_small_p();
  criterion_core_invariants();
  criterion_determinism();
  if (failures == 0) {
    std::printf("all acceptance criteria pass\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", failures);
  return 1;
}
