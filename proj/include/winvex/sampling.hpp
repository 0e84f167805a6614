#pragma once

// Domains X, seeded pair sampling and delta grids.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace winvex {

using Point = std::vector<double>;

/// Counter-based uniform generator: the value at (seed, stream, index) does
/// not depend on how many values were drawn before it.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t k = mix64(seed ^ mix64(stream ^ mix64(index)));
  return static_cast<double>(k >> 11) * 0x1.0p-53;
}

struct Interval {
  double lo;
  double hi;
  bool operator==(const Interval&) const = default;
};

enum class DomainKind { box, half_line, full_space };

inline const char* to_string(DomainKind k) {
  switch (k) {
    case DomainKind::box: return "box";
    case DomainKind::half_line: return "half-line";
    case DomainKind::full_space: return "full-space";
  }
  return "?";
}

/// A sampleable subset of R^n. Unbounded kinds carry an explicit sampling box
/// and all verdicts on them are relative to that box.
class Domain {
 public:
  static Domain box(std::vector<Interval> bounds) {
    Domain d(DomainKind::box, bounds, bounds);
    return d;
  }

  /// Product of [lower_i, inf).
  static Domain half_line(const std::vector<double>& lower, std::vector<Interval> sampling_box) {
    std::vector<Interval> bounds;
    for (double lo : lower) bounds.push_back({lo, std::numeric_limits<double>::infinity()});
    return Domain(DomainKind::half_line, std::move(bounds), std::move(sampling_box));
  }

  static Domain full_space(std::vector<Interval> sampling_box) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Interval> bounds(sampling_box.size(), Interval{-inf, inf});
    return Domain(DomainKind::full_space, std::move(bounds), std::move(sampling_box));
  }

  int dimension() const noexcept { return static_cast<int>(bounds_.size()); }
  DomainKind kind() const noexcept { return kind_; }
  std::span<const Interval> bounds() const noexcept { return bounds_; }
  std::span<const Interval> sampling_box() const noexcept { return box_; }

  /// Same domain, different sampling box.
  Domain with_sampling_box(std::vector<Interval> box) const {
    if (kind_ == DomainKind::box) return Domain::box(std::move(box));
    return Domain(kind_, bounds_, std::move(box));
  }

  Point center() const {
    Point c(box_.size());
    for (std::size_t i = 0; i < box_.size(); ++i) c[i] = 0.5 * (box_[i].lo + box_[i].hi);
    return c;
  }

  /// Bit i of `mask` selects the upper bound of coordinate i.
  Point corner(std::uint64_t mask) const {
    Point c(box_.size());
    for (std::size_t i = 0; i < box_.size(); ++i) c[i] = ((mask >> i) & 1) ? box_[i].hi : box_[i].lo;
    return c;
  }

  /// Chebyshev distance from `p` to the domain (0 inside). NaN coordinates
  /// give NaN.
  double distance(std::span<const double> p) const {
    if (p.size() != bounds_.size()) throw std::invalid_argument("point dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (std::isnan(p[i])) return std::numeric_limits<double>::quiet_NaN();
      d = std::max({d, bounds_[i].lo - p[i], p[i] - bounds_[i].hi});
    }
    return d;
  }

  bool in_sampling_box(std::span<const double> p, double tol) const {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!(p[i] >= box_[i].lo - tol && p[i] <= box_[i].hi + tol)) return false;
    return true;
  }

 private:
  Domain(DomainKind kind, std::vector<Interval> bounds, std::vector<Interval> box)
      : kind_(kind), bounds_(std::move(bounds)), box_(std::move(box)) {
    if (bounds_.empty()) throw std::invalid_argument("domain dimension must be positive");
    if (box_.size() != bounds_.size())
      throw std::invalid_argument("sampling box dimension does not match domain");
    for (std::size_t i = 0; i < box_.size(); ++i) {
      const Interval& b = box_[i];
      if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi))
        throw std::invalid_argument("sampling box must be finite with lo < hi in coordinate " +
                                    std::to_string(i));
      if (b.lo < bounds_[i].lo || b.hi > bounds_[i].hi)
        throw std::invalid_argument("sampling box must lie inside the domain");
      if (std::isnan(bounds_[i].lo)) throw std::invalid_argument("domain bound is NaN");
    }
  }

  DomainKind kind_;
  std::vector<Interval> bounds_;
  std::vector<Interval> box_;
};

/// Per-coordinate tolerance band around the domain.
inline bool contains(const Domain& d, std::span<const double> p, double tol) {
  double dist = d.distance(p);
  return dist <= tol;
}

enum class EtaMode { as_written, w_lifted };

inline const char* to_string(EtaMode m) {
  return m == EtaMode::as_written ? "as-written" : "w-lifted";
}

struct CheckConfig {
  int pair_samples = 2000;
  int delta_points = 33;
  double delta_margin = 1e-3;
  double tol_weak = 1e-9;
  double tol_strict = 1e-12;
  double tol_membership = 1e-9;
  std::uint64_t seed = 0;
  EtaMode eta_mode = EtaMode::as_written;

  void validate() const {
    if (pair_samples < 1) throw std::invalid_argument("pair_samples must be positive");
    if (delta_points < 2) throw std::invalid_argument("delta_points must be >= 2");
    if (!(delta_margin >= 0.0 && delta_margin < 0.5))
      throw std::invalid_argument("delta_margin must lie in [0, 0.5)");
    if (!(tol_weak >= 0.0) || !(tol_strict >= 0.0) || !(tol_membership >= 0.0))
      throw std::invalid_argument("tolerances must be non-negative");
  }

  bool operator==(const CheckConfig&) const = default;
};

struct PointPair {
  Point z1;
  Point z2;
};

namespace detail {

// Structured stratum, in order: corner diagonals (c_i, c_i), the centre
// diagonal, off-diagonal corner pairs, corner/centre pairs. Enumerated lazily
// and truncated at `limit`.
inline std::vector<PointPair> structured_pairs(const Domain& d, std::size_t limit) {
  std::vector<PointPair> out;
  const int n = d.dimension();
  const std::uint64_t corners = n < 20 ? (std::uint64_t{1} << n) : (std::uint64_t{1} << 20);
  const Point mid = d.center();
  auto push = [&](Point a, Point b) {
    if (out.size() < limit) out.push_back({std::move(a), std::move(b)});
    return out.size() < limit;
  };
  for (std::uint64_t i = 0; i < corners; ++i)
    if (!push(d.corner(i), d.corner(i))) return out;
  if (!push(mid, mid)) return out;
  for (std::uint64_t i = 0; i < corners; ++i)
    for (std::uint64_t j = 0; j < corners; ++j)
      if (i != j && !push(d.corner(i), d.corner(j))) return out;
  for (std::uint64_t i = 0; i < corners; ++i) {
    if (!push(d.corner(i), mid)) return out;
    if (!push(mid, d.corner(i))) return out;
  }
  return out;
}

}  // namespace detail

/// Exactly config.pair_samples pairs: the structured stratum first, then
/// seeded uniform fill over the sampling box.
inline std::vector<PointPair> sample_pairs(const Domain& domain, const CheckConfig& config) {
  config.validate();
  const auto total = static_cast<std::size_t>(config.pair_samples);
  std::vector<PointPair> pairs = detail::structured_pairs(domain, total);
  const std::size_t n = static_cast<std::size_t>(domain.dimension());
  const auto box = domain.sampling_box();
  for (std::size_t p = pairs.size(); p < total; ++p) {
    PointPair pp{Point(n), Point(n)};
    for (std::size_t j = 0; j < n; ++j) {
      const double u1 = counter_uniform(config.seed, 0, p * 2 * n + j);
      const double u2 = counter_uniform(config.seed, 0, p * 2 * n + n + j);
      pp.z1[j] = box[j].lo + (box[j].hi - box[j].lo) * u1;
      pp.z2[j] = box[j].lo + (box[j].hi - box[j].lo) * u2;
    }
    pairs.push_back(std::move(pp));
  }
  return pairs;
}

enum class DeltaInterval { closed, open };

/// Closed: uniform on [0, 1] with both endpoints exact. Open: uniform on
/// [margin, 1 - margin], mirrored so the grid is symmetric about 0.5.
inline std::vector<double> delta_grid(const CheckConfig& config, DeltaInterval interval) {
  config.validate();
  const int m = config.delta_points;
  const double lo = interval == DeltaInterval::closed ? 0.0 : config.delta_margin;
  std::vector<double> g(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const int k = std::min(i, m - 1 - i);
    const double v = lo + (1.0 - 2.0 * lo) * static_cast<double>(k) / static_cast<double>(m - 1);
    g[static_cast<std::size_t>(i)] = (i == k) ? v : 1.0 - v;
  }
  if (m % 2 == 1) g[static_cast<std::size_t>(m / 2)] = 0.5;
  return g;
}

}  // namespace winvex
