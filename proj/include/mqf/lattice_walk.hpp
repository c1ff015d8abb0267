#pragma once

// Depth-first enumeration of the superset lattice inside a LatticeBox, with
// two optional prunings:
//   * an exact axis-aligned ellipsoid  sum_I m_I^2 p_I <= R  (integer math),
//   * an approximate embedding window  lo_t <= sigma_t(point) <= hi_t.
// The window is evaluated in doubles and every derived coordinate range is
// widened by one grid step, so it only ever discards points that are far
// outside; visitors must re-check anything they rely on.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mqf/integers.hpp"

namespace mqf {

enum class Visit { Continue, Stop };

struct WalkResult {
  std::uint64_t visited = 0;
  bool budget_exceeded = false;
  bool stopped = false;
};

class LatticeWalker {
 public:
  explicit LatticeWalker(LatticeBox box) : box_(std::move(box)) {
    const MultiquadField& f = box_.field;
    n_ = f.degree();
    step_.resize(n_);
    bound_.resize(n_);
    const double den = box_.denominator.get_d();
    for (Mask I = 0; I < n_; ++I) {
      step_[I] = f.sqrt_approx(I) / den;
      bound_[I] = box_.numerator_bound[I].fits_slong_p() ? box_.numerator_bound[I].get_si()
                                                          : std::numeric_limits<std::int64_t>::max() / 4;
    }
    free_radius_.assign(n_ + 1, 0.0);
    for (std::size_t d = n_; d-- > 0;) {
      free_radius_[d] = free_radius_[d + 1] + static_cast<double>(bound_[d]) * step_[d];
    }
  }

  void set_window(std::vector<double> lo, std::vector<double> hi) {
    lo_ = std::move(lo);
    hi_ = std::move(hi);
  }

  /// Keep only points with floor < sum m_I^2 p_I <= radius.
  void set_ellipsoid(Integer radius, std::optional<Integer> floor = std::nullopt) {
    radius_ = std::move(radius);
    floor_ = std::move(floor);
  }

  /// Skip points whose first nonzero coordinate is negative and the origin,
  /// i.e. visit one representative of each pair {c, -c}.
  void set_half_space(bool on) { half_ = on; }

  const LatticeBox& box() const { return box_; }

  template <class Visitor>
  WalkResult walk(Visitor&& visit, std::uint64_t budget) const {
    State s;
    s.m.assign(n_, 0);
    s.partial.assign((n_ + 1) * n_, 0.0);
    s.rem.assign(n_ + 1, Integer(0));
    if (radius_) s.rem[0] = *radius_;
    s.budget = budget;
    descend(0, s, visit);
    return s.result;
  }

 private:
  struct State {
    std::vector<std::int64_t> m;
    std::vector<double> partial;  // row d: embedding sums of coordinates < d
    std::vector<Integer> rem;     // ellipsoid slack before coordinate d
    std::uint64_t budget = 0;
    WalkResult result;
    bool done = false;
  };

  template <class Visitor>
  void descend(std::size_t d, State& s, Visitor& visit) const {
    if (d == n_) {
      leaf(s, visit);
      return;
    }
    std::int64_t lo = -bound_[d];
    std::int64_t hi = bound_[d];
    if (radius_) {
      if (s.rem[d] < 0) return;
      Integer r = isqrt(s.rem[d] / box_.field.radicand(d));
      if (r.fits_slong_p() && r.get_si() < hi) {
        hi = r.get_si();
        lo = -hi;
      }
    }
    if (!lo_.empty() && !narrow(d, s, lo, hi)) return;
    if (half_) {
      bool prefix_zero = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (s.m[i] != 0) {
          prefix_zero = false;
          break;
        }
      }
      if (prefix_zero && lo < 0) lo = 0;
    }
    const double* parent = &s.partial[d * n_];
    double* child = &s.partial[(d + 1) * n_];
    for (std::int64_t v = lo; v <= hi && !s.done; ++v) {
      s.m[d] = v;
      if (!lo_.empty()) {
        const double term = static_cast<double>(v) * step_[d];
        for (Mask t = 0; t < n_; ++t) child[t] = parent[t] + character(static_cast<Mask>(d), t) * term;
      }
      if (radius_) {
        Integer mv(static_cast<long>(v));
        s.rem[d + 1] = s.rem[d] - mv * mv * box_.field.radicand(static_cast<Mask>(d));
      }
      descend(d + 1, s, visit);
    }
    s.m[d] = 0;
  }

  template <class Visitor>
  void leaf(State& s, Visitor& visit) const {
    if (half_) {
      std::size_t i = 0;
      while (i < n_ && s.m[i] == 0) ++i;
      if (i == n_ || s.m[i] < 0) return;
    }
    if (floor_ && radius_) {
      // sum m^2 p = radius - rem
      if (*radius_ - s.rem[n_] <= *floor_) return;
    }
    if (s.result.visited >= s.budget) {
      s.result.budget_exceeded = true;
      s.done = true;
      return;
    }
    ++s.result.visited;
    if (visit(std::span<const std::int64_t>(s.m)) == Visit::Stop) {
      s.result.stopped = true;
      s.done = true;
    }
  }

  // Intersects [lo, hi] with the coordinate range allowed by the window,
  // assuming the remaining coordinates may take any value in the box.
  bool narrow(std::size_t d, const State& s, std::int64_t& lo, std::int64_t& hi) const {
    const double* partial = &s.partial[d * n_];
    const double free = free_radius_[d + 1];
    const double step = step_[d];
    for (Mask t = 0; t < n_; ++t) {
      const double a = lo_[t] - partial[t] - free;
      const double b = hi_[t] - partial[t] + free;
      double vmin, vmax;
      if (character(static_cast<Mask>(d), t) > 0) {
        vmin = a / step;
        vmax = b / step;
      } else {
        vmin = -b / step;
        vmax = -a / step;
      }
      if (std::isfinite(vmin) && vmin > static_cast<double>(lo)) {
        double c = std::ceil(vmin) - 1;
        if (c > static_cast<double>(hi)) return false;
        if (c > static_cast<double>(lo)) lo = static_cast<std::int64_t>(c);
      }
      if (std::isfinite(vmax) && vmax < static_cast<double>(hi)) {
        double c = std::floor(vmax) + 1;
        if (c < static_cast<double>(lo)) return false;
        if (c < static_cast<double>(hi)) hi = static_cast<std::int64_t>(c);
      }
      if (lo > hi) return false;
    }
    return true;
  }

  LatticeBox box_;
  std::size_t n_ = 0;
  std::vector<double> step_;
  std::vector<std::int64_t> bound_;
  std::vector<double> free_radius_;
  std::vector<double> lo_, hi_;
  std::optional<Integer> radius_;
  std::optional<Integer> floor_;
  bool half_ = false;
};

/// Approximate embeddings of the lattice point m / 2^k. `magnitude` receives
/// sum |m_I| sqrt p_I / 2^k, which scales the rounding error.
inline void lattice_point_embeddings(const MultiquadField& f, std::span<const std::int64_t> m,
                                     std::vector<double>& out, double* magnitude = nullptr) {
  const std::size_t n = f.degree();
  const double den = static_cast<double>(n);
  out.assign(n, 0.0);
  double mag = 0.0;
  for (Mask I = 0; I < n; ++I) {
    if (m[I] == 0) continue;
    const double term = static_cast<double>(m[I]) * f.sqrt_approx(I) / den;
    mag += std::abs(term);
    for (Mask t = 0; t < n; ++t) out[t] += character(I, t) * term;
  }
  if (magnitude) *magnitude = mag;
}

}  // namespace mqf
