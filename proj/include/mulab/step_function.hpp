#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mulab {

/// Analytic tail f(t) = coef * t^(-1/p) attached past the last finite
/// breakpoint. Quasinorm and integral formulas for such tails are closed
/// form; pointwise comparisons never need to sample them.
template <typename Scalar = double>
struct PowerTail {
  Scalar coef;
  Scalar p;  // decay exponent is 1/p
};

/// Non-increasing right-continuous step function on (0, inf), stored as
/// (value, width) segments. The universal carrier of generalized singular
/// value functions: values are nonnegative, widths positive, and at most the
/// final width may be infinite (then its value must be 0, analytic tails
/// excepted).
template <typename Scalar = double>
class StepFunction {
 public:
  struct Segment {
    Scalar value;
    Scalar width;
  };

  static constexpr Scalar kValueTol = Scalar(1e-12);  // relative merge tolerance

  StepFunction() = default;

  explicit StepFunction(std::vector<Segment> segments,
                        std::optional<PowerTail<Scalar>> tail = std::nullopt)
      : segments_(std::move(segments)), tail_(tail) {
    canonicalize();
  }

  const std::vector<Segment>& segments() const { return segments_; }
  const std::optional<PowerTail<Scalar>>& tail() const { return tail_; }
  bool is_zero() const {
    return !tail_ && std::all_of(segments_.begin(), segments_.end(),
                                 [](const Segment& s) { return s.value == Scalar(0); });
  }

  /// Total width of the finite segments (support length if no tail).
  Scalar support_width() const {
    return cum_width_.empty() ? Scalar(0) : cum_width_.back();
  }

  Scalar value_at(Scalar t) const {
    const auto it = std::upper_bound(cum_width_.begin(), cum_width_.end(), t);
    if (it != cum_width_.end())
      return segments_[static_cast<std::size_t>(it - cum_width_.begin())].value;
    if (tail_) return tail_->coef * std::pow(t, Scalar(-1) / tail_->p);
    return Scalar(0);
  }

  /// Exact partial integral over (0, t].
  Scalar partial_integral(Scalar t) const {
    if (t <= Scalar(0) || segments_.empty()) return Scalar(0);
    const auto it = std::upper_bound(cum_width_.begin(), cum_width_.end(), t);
    const auto idx = static_cast<std::size_t>(it - cum_width_.begin());
    if (idx < segments_.size()) {
      const Scalar before = idx == 0 ? Scalar(0) : cum_width_[idx - 1];
      const Scalar left = idx == 0 ? Scalar(0) : cum_integral_[idx - 1];
      return left + segments_[idx].value * (t - before);
    }
    Scalar integral = cum_integral_.back();
    if (tail_ && t > cum_width_.back()) {
      const Scalar a = Scalar(1) - Scalar(1) / tail_->p;
      if (std::abs(a) < Scalar(1e-14))
        integral += tail_->coef * std::log(t / cum_width_.back());
      else
        integral += tail_->coef * (std::pow(t, a) - std::pow(cum_width_.back(), a)) / a;
    }
    return integral;
  }

  /// Total integral; +inf when a non-integrable tail or an infinite-width
  /// positive segment is present.
  Scalar total_integral() const {
    Scalar integral = cum_integral_.empty() ? Scalar(0) : cum_integral_.back();
    if (tail_) {
      if (tail_->p >= Scalar(1)) return std::numeric_limits<Scalar>::infinity();
      const Scalar a = Scalar(1) - Scalar(1) / tail_->p;  // a < 0
      integral += -tail_->coef * std::pow(support_width(), a) / a;
    }
    return integral;
  }

  /// Right endpoints of all segments (cumulative widths), finite ones only.
  std::vector<Scalar> breakpoints() const {
    std::vector<Scalar> out;
    for (Scalar w : cum_width_)
      if (!std::isinf(w)) out.push_back(w);
    return out;
  }

 private:
  void canonicalize() {
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      auto& s = segments_[i];
      if (s.value < Scalar(0) || std::isnan(s.value))
        throw std::invalid_argument("step function values must be nonnegative");
      if (!(s.width > Scalar(0)))
        throw std::invalid_argument("step function widths must be positive");
      if (std::isinf(s.width) && i + 1 != segments_.size())
        throw std::invalid_argument("only the final width may be infinite");
      if (std::isinf(s.width) && s.value > Scalar(0))
        throw std::invalid_argument("an infinite final width requires value 0");
      if (i > 0 && segments_[i - 1].value < s.value - kValueTol * std::max(Scalar(1), s.value))
        throw std::invalid_argument("step function values must be non-increasing");
    }
    std::vector<Segment> merged;
    for (const auto& s : segments_) {
      if (!merged.empty() &&
          std::abs(merged.back().value - s.value) <=
              kValueTol * std::max({Scalar(1), merged.back().value, s.value})) {
        merged.back().width += s.width;
      } else {
        merged.push_back(s);
      }
    }
    segments_ = std::move(merged);
    cum_width_.resize(segments_.size());
    cum_integral_.resize(segments_.size());
    Scalar w = 0, integral = 0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      w += segments_[i].width;
      if (!std::isinf(segments_[i].width)) integral += segments_[i].value * segments_[i].width;
      cum_width_[i] = w;
      cum_integral_[i] = integral;
    }
  }

  std::vector<Segment> segments_;
  std::optional<PowerTail<Scalar>> tail_;
  std::vector<Scalar> cum_width_;
  std::vector<Scalar> cum_integral_;
};

/// Decreasing rearrangement of weighted samples: |values| sorted
/// non-increasingly, each keeping its weight. Ties are merged by
/// canonicalization, so the sort order of ties is unobservable.
template <typename Scalar = double>
StepFunction<Scalar> decreasing_rearrangement(std::vector<std::pair<Scalar, Scalar>> samples) {
  for (auto& [v, w] : samples) {
    if (!(w > Scalar(0))) throw std::invalid_argument("sample weights must be positive");
    v = std::abs(v);
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  typename std::vector<typename StepFunction<Scalar>::Segment> segs;
  segs.reserve(samples.size());
  for (const auto& [v, w] : samples) segs.push_back({v, w});
  return StepFunction<Scalar>(std::move(segs));
}

/// Values raised to the power p, widths kept.
template <typename Scalar>
StepFunction<Scalar> power(const StepFunction<Scalar>& f, Scalar p) {
  std::vector<typename StepFunction<Scalar>::Segment> segs;
  for (const auto& s : f.segments()) segs.push_back({std::pow(s.value, p), s.width});
  if (f.tail()) throw std::invalid_argument("power of an analytic tail is not supported");
  return StepFunction<Scalar>(std::move(segs));
}

/// mu of a direct sum: concatenate all segments and rearrange.
template <typename Scalar>
StepFunction<Scalar> direct_sum(const std::vector<StepFunction<Scalar>>& fs) {
  std::vector<std::pair<Scalar, Scalar>> samples;
  for (const auto& f : fs) {
    if (f.tail()) throw std::invalid_argument("direct sum of analytic tails is not supported");
    for (const auto& s : f.segments())
      if (!std::isinf(s.width)) samples.emplace_back(s.value, s.width);
  }
  if (samples.empty()) return StepFunction<Scalar>();
  return decreasing_rearrangement(std::move(samples));
}

/// mu(f (x) g): all pairwise value products carrying width products,
/// rearranged. Both inputs must have finitely many finite segments.
template <typename Scalar>
StepFunction<Scalar> tensor_rearrangement(const StepFunction<Scalar>& f,
                                          const StepFunction<Scalar>& g) {
  if (f.tail() || g.tail())
    throw std::invalid_argument("tensor rearrangement needs finitely supported inputs");
  std::vector<std::pair<Scalar, Scalar>> samples;
  samples.reserve(f.segments().size() * g.segments().size());
  for (const auto& a : f.segments()) {
    if (std::isinf(a.width) && a.value > Scalar(0))
      throw std::invalid_argument("tensor rearrangement needs finite widths");
    for (const auto& b : g.segments()) {
      if (std::isinf(b.width) && b.value > Scalar(0))
        throw std::invalid_argument("tensor rearrangement needs finite widths");
      if (std::isinf(a.width) || std::isinf(b.width)) continue;
      samples.emplace_back(a.value * b.value, a.width * b.width);
    }
  }
  if (samples.empty()) return StepFunction<Scalar>();
  return decreasing_rearrangement(std::move(samples));
}

/// Pointwise sum of non-increasing step functions (itself non-increasing);
/// used for partial-integral comparisons against sums of rearrangements.
template <typename Scalar>
StepFunction<Scalar> pointwise_sum(const std::vector<StepFunction<Scalar>>& fs) {
  std::vector<Scalar> cuts;
  for (const auto& f : fs) {
    if (f.tail()) throw std::invalid_argument("pointwise sum of analytic tails is not supported");
    for (Scalar b : f.breakpoints()) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](Scalar a, Scalar b) { return std::abs(a - b) <= Scalar(1e-15) * std::max(a, b); }),
             cuts.end());
  std::vector<typename StepFunction<Scalar>::Segment> segs;
  Scalar prev = 0;
  for (Scalar c : cuts) {
    const Scalar mid = prev + (c - prev) / 2;
    Scalar v = 0;
    for (const auto& f : fs) v += f.value_at(mid);
    if (c > prev) segs.push_back({v, c - prev});
    prev = c;
  }
  if (segs.empty()) return StepFunction<Scalar>();
  return StepFunction<Scalar>(std::move(segs));
}

/// Replace consecutive segment blocks by their width-weighted averages.
/// The result is majorized by the input (same total, flatter profile);
/// the canonical way to build pairs where majorization holds by construction.
template <typename Scalar>
StepFunction<Scalar> segment_block_average(const StepFunction<Scalar>& f,
                                           const std::vector<std::size_t>& block_sizes) {
  if (f.tail()) throw std::invalid_argument("block averaging needs finite support");
  std::vector<typename StepFunction<Scalar>::Segment> segs;
  std::size_t i = 0;
  const auto& in = f.segments();
  for (std::size_t bs : block_sizes) {
    if (bs == 0 || i >= in.size()) break;
    Scalar mass = 0, width = 0;
    for (std::size_t j = 0; j < bs && i < in.size(); ++j, ++i) {
      if (std::isinf(in[i].width)) throw std::invalid_argument("block averaging needs finite widths");
      mass += in[i].value * in[i].width;
      width += in[i].width;
    }
    segs.push_back({mass / width, width});
  }
  for (; i < in.size(); ++i) segs.push_back(in[i]);
  return StepFunction<Scalar>(std::move(segs));
}

}  // namespace mulab
