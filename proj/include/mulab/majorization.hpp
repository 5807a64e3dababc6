#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mulab/step_function.hpp"

namespace mulab {

/// Result of a submajorization / majorization test.
template <typename Scalar = double>
struct MajorizationVerdict {
  bool holds = false;
  Scalar observed_constant = 0;  // smallest slack that would pass
  Scalar worst_breakpoint = 0;
  std::pair<Scalar, Scalar> totals = {0, 0};  // (dominating side, dominated side)
};

namespace detail {

template <typename Scalar>
std::vector<Scalar> merged_breakpoints(const StepFunction<Scalar>& a,
                                       const StepFunction<Scalar>& b) {
  std::vector<Scalar> cuts = a.breakpoints();
  for (Scalar t : b.breakpoints()) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](Scalar x, Scalar y) {
                           return std::abs(x - y) <= Scalar(1e-15) * std::max(x, y);
                         }),
             cuts.end());
  return cuts;
}

}  // namespace detail

/// Hardy-Littlewood-Polya test: does int_0^t f <= slack * int_0^t g hold for
/// all t? Partial integrals are piecewise linear, so checking the union of
/// breakpoints is exact. Reports the smallest slack that would pass and where
/// the worst ratio occurs.
template <typename Scalar>
MajorizationVerdict<Scalar> submajorizes(const StepFunction<Scalar>& g,
                                         const StepFunction<Scalar>& f,
                                         Scalar slack = Scalar(1)) {
  if (f.tail() || g.tail())
    throw std::invalid_argument("submajorization needs step data without analytic tails");
  MajorizationVerdict<Scalar> verdict;
  verdict.totals = {g.total_integral(), f.total_integral()};
  Scalar worst = 0, worst_t = 0;
  for (Scalar t : detail::merged_breakpoints(f, g)) {
    const Scalar num = f.partial_integral(t);
    const Scalar den = g.partial_integral(t);
    Scalar ratio;
    if (den > Scalar(0))
      ratio = num / den;
    else if (num > Scalar(1e-300))
      ratio = std::numeric_limits<Scalar>::infinity();
    else
      continue;
    if (ratio > worst) {
      worst = ratio;
      worst_t = t;
    }
  }
  verdict.observed_constant = worst;
  verdict.worst_breakpoint = worst_t;
  verdict.holds = worst <= slack * (Scalar(1) + Scalar(1e-12)) + Scalar(1e-300);
  return verdict;
}

/// Majorization: submajorization with slack 1 plus equality of the (finite)
/// total integrals within relative tolerance.
template <typename Scalar>
MajorizationVerdict<Scalar> majorizes(const StepFunction<Scalar>& g,
                                      const StepFunction<Scalar>& f,
                                      Scalar tol = Scalar(1e-9)) {
  auto verdict = submajorizes(g, f, Scalar(1));
  const Scalar tg = verdict.totals.first, tf = verdict.totals.second;
  if (std::isinf(tg) || std::isinf(tf))
    throw std::invalid_argument("majorization requires finite total integrals");
  const Scalar scale = std::max({Scalar(1), std::abs(tg), std::abs(tf)});
  if (std::abs(tg - tf) > tol * scale) verdict.holds = false;
  return verdict;
}

/// Weak-L_p gauge: sup over segment right endpoints of t^{1/p} * value.
/// (mu is constant on segments, so the sup over each segment sits at its
/// right endpoint.) May return +inf.
template <typename Scalar>
Scalar lorentz_quasinorm(const StepFunction<Scalar>& f, Scalar p) {
  if (!(p > Scalar(0))) throw std::invalid_argument("lorentz quasinorm needs p > 0");
  Scalar sup = 0, t = 0;
  for (const auto& s : f.segments()) {
    if (std::isinf(s.width)) break;  // canonical: value 0 there
    t += s.width;
    sup = std::max(sup, std::pow(t, Scalar(1) / p) * s.value);
  }
  if (f.tail()) {
    const Scalar q = f.tail()->p, c = f.tail()->coef;
    if (p < q) return std::numeric_limits<Scalar>::infinity();
    if (p == q)
      sup = std::max(sup, c);
    else
      sup = std::max(sup, c * std::pow(f.support_width(), Scalar(1) / p - Scalar(1) / q));
  }
  return sup;
}

/// Schatten norm from the singular value function: (sum value^p * width)^{1/p};
/// p = inf returns the top value.
template <typename Scalar>
Scalar schatten_norm(const StepFunction<Scalar>& f, Scalar p) {
  if (std::isinf(p)) {
    Scalar top = f.segments().empty() ? Scalar(0) : f.segments().front().value;
    if (f.tail()) top = std::max(top, f.value_at(f.support_width()));
    return top;
  }
  if (!(p > Scalar(0))) throw std::invalid_argument("schatten norm needs p > 0");
  Scalar sum = 0;
  for (const auto& s : f.segments()) {
    if (std::isinf(s.width)) break;
    sum += std::pow(s.value, p) * s.width;
  }
  if (f.tail()) {
    const Scalar q = f.tail()->p, c = f.tail()->coef;
    if (p <= q) return std::numeric_limits<Scalar>::infinity();
    const Scalar t0 = f.support_width();
    sum += std::pow(c, p) * std::pow(t0, Scalar(1) - p / q) / (p / q - Scalar(1));
  }
  return std::pow(sum, Scalar(1) / p);
}

/// (int_0^1 f^2)^{1/2}: the integral gauge used as the (L_2 + L_inf)
/// diagnostic. Lower-bounds the sum-space norm; equality is not claimed.
template <typename Scalar>
Scalar l2linf_gauge(const StepFunction<Scalar>& f) {
  Scalar acc = 0, t = 0;
  for (const auto& s : f.segments()) {
    if (t >= Scalar(1)) break;
    const Scalar take = std::min(std::isinf(s.width) ? Scalar(1) : s.width, Scalar(1) - t);
    acc += s.value * s.value * take;
    t += take;
  }
  if (f.tail() && t < Scalar(1)) {
    const Scalar q = f.tail()->p, c = f.tail()->coef;
    const Scalar a = Scalar(1) - Scalar(2) / q;
    if (std::abs(a) < Scalar(1e-14))
      acc += c * c * std::log(Scalar(1) / t);
    else
      acc += c * c * (std::pow(Scalar(1), a) - std::pow(t, a)) / a;
  }
  return std::sqrt(acc);
}

/// Cesaro average t -> (1/t) int_0^t f. Constant stretches stay exact; pieces
/// where the average varies are refined geometrically until each sub-segment's
/// relative variation is below rel_tol; past the support the exact coef/t tail
/// is attached analytically. A segment budget guards against pathological
/// refinement demands.
template <typename Scalar>
StepFunction<Scalar> cesaro(const StepFunction<Scalar>& f, Scalar rel_tol = Scalar(1e-6),
                            std::size_t max_segments = (std::size_t(1) << 22)) {
  if (f.tail()) throw std::invalid_argument("cesaro of an analytic tail is not supported");
  std::vector<typename StepFunction<Scalar>::Segment> out;
  std::optional<PowerTail<Scalar>> tail;
  Scalar left = 0, integral_left = 0;
  for (const auto& s : f.segments()) {
    if (std::isinf(s.width) || s.value == Scalar(0)) break;  // exact coef/t from here on
    const Scalar v = s.value;
    const Scalar right = left + s.width;
    const Scalar c = integral_left - v * left;  // C(t) = v + c/t on (left, right]
    if (c <= Scalar(1e-300) * std::max(Scalar(1), integral_left)) {
      out.push_back({v, s.width});
    } else {
      Scalar t = left;
      while (t < right) {
        if (out.size() >= max_segments)
          throw std::runtime_error("cesaro refinement exceeds the segment budget");
        Scalar step = rel_tol * t * (v * t + c) / c;
        step = std::max(step, right * Scalar(1e-12));
        const Scalar u = std::min(right, t + step);
        // exact average of v + c/t over (t, u]
        out.push_back({v + c * std::log(u / t) / (u - t), u - t});
        t = u;
      }
    }
    integral_left += v * s.width;
    left = right;
  }
  if (left > Scalar(0) && integral_left > Scalar(0))
    tail = PowerTail<Scalar>{integral_left, Scalar(1)};
  if (out.empty() && !tail) return StepFunction<Scalar>();
  return StepFunction<Scalar>(std::move(out), tail);
}

}  // namespace mulab
