#pragma once

// Reference implementations written directly against closed-form lambdas.
// They share no code with the library beyond the standard library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace oracle {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

struct Instance {
  Fn1 h;      // may be empty for set checks
  Fn2 eta;    // eta(z, y)
  Fn1 w;
  double lower = -std::numeric_limits<double>::infinity();  // X = [lower, inf) or R
  double lo = 0.0, hi = 1.0;                                // sampling box
};

inline Instance set_halfline() {
  return {{}, [](double z, double y) { return z * (y - 2); }, [](double y) { return y + 2; }, 0.0, 0.0, 100.0};
}
inline Instance minus7(double k = 0.0) {
  return {[k](double z) { return z + k; }, [](double z, double y) { return z - y - 6; },
          [](double y) { return y - 7; }, -std::numeric_limits<double>::infinity(), -10.0, 10.0};
}
inline Instance plus6(double k = 0.0) {
  return {[k](double z) { return z + k; }, [](double z, double y) { return z - y + 6; },
          [](double y) { return y + 6; }, -std::numeric_limits<double>::infinity(), -10.0, 10.0};
}
inline Instance quintic() {
  return {[](double z) { return z * z * z * z * z; }, [](double z, double y) { return z - y - 6; },
          [](double y) { return y - 6; }, -std::numeric_limits<double>::infinity(), -4000.0, 4000.0};
}
inline Instance piecewise11() {
  return {[](double z) { return z < 11 ? 11.0 : -11.0; },
          [](double z, double y) { return z * z + y * y + 11; }, [](double y) { return y + 11; }, 0.0,
          0.0, 30.0};
}

inline Instance classical(Instance in) {
  in.w = [](double y) { return y; };
  return in;
}

enum class Kind { set, preinvex, strict_preinvex, prequasi, strict_prequasi, semistrict_prequasi };

/// Dense grid search: true if some (z1, z2, delta) on an N x N x M grid
/// violates the defining inequality.
inline bool refutes(const Instance& in, Kind kind, int N = 161, int M = 41, double margin = 1e-3) {
  const bool strict =
      kind == Kind::strict_preinvex || kind == Kind::strict_prequasi || kind == Kind::semistrict_prequasi;
  for (int i = 0; i < N; ++i) {
    const double z1 = in.lo + (in.hi - in.lo) * i / (N - 1);
    for (int j = 0; j < N; ++j) {
      const double z2 = in.lo + (in.hi - in.lo) * j / (N - 1);
      const double base = in.w(z2);
      const double dir = in.eta(z1, base);
      for (int m = 0; m < M; ++m) {
        double d = static_cast<double>(m) / (M - 1);
        if (strict) d = margin + (1 - 2 * margin) * d;
        const double g = base + d * dir;
        if (kind == Kind::set) {
          if (g < in.lower - 1e-9) return true;
          continue;
        }
        const double h1 = in.h(z1), h2 = in.h(z2), lhs = in.h(g);
        if (kind == Kind::strict_preinvex || kind == Kind::strict_prequasi) {
          if (z1 == z2) continue;
        }
        if (kind == Kind::semistrict_prequasi && h1 == h2) continue;
        const double chord = d * h1 + (1 - d) * h2;
        const double mx = std::max(h1, h2);
        switch (kind) {
          case Kind::preinvex:
            if (lhs > chord + 1e-9) return true;
            break;
          case Kind::strict_preinvex:
            if (!(lhs < chord - 1e-12)) return true;
            break;
          case Kind::prequasi:
            if (lhs > mx + 1e-9) return true;
            break;
          case Kind::strict_prequasi:
          case Kind::semistrict_prequasi:
            if (!(lhs < mx - 1e-12)) return true;
            break;
          default: break;
        }
      }
    }
  }
  return false;
}

/// min over the open delta grid of (h(z2) - h(base + d*eta(z1, w(z2)))) / (d(1-d)).
inline double required_b(const Instance& in, double z1, double z2, bool lifted, int M = 33,
                         double margin = 1e-3) {
  const double wz2 = in.w(z2);
  const double dir = in.eta(z1, wz2);
  const double base = lifted ? wz2 : z2;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    const double d = margin + (1 - 2 * margin) * m / (M - 1);
    best = std::min(best, (in.h(z2) - in.h(base + d * dir)) / (d * (1 - d)));
  }
  return best;
}

/// True if some grid pair with h(z1) < h(z2) admits no positive b.
inline bool pseudo_refutes(const Instance& in, bool lifted, int N = 161) {
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double z1 = in.lo + (in.hi - in.lo) * i / (N - 1);
      const double z2 = in.lo + (in.hi - in.lo) * j / (N - 1);
      if (!(in.h(z1) < in.h(z2) - 1e-12)) continue;
      if (required_b(in, z1, z2, lifted) <= 1e-12) return true;
    }
  return false;
}

/// Grid minimum of h over [lo, hi] subject to g <= 0.
inline std::pair<double, double> grid_min(const Fn1& h, const Fn1& g, double lo, double hi, int N) {
  double best = std::numeric_limits<double>::infinity(), arg = lo;
  for (int i = 0; i < N; ++i) {
    const double z = lo + (hi - lo) * i / (N - 1);
    if (g && g(z) > 1e-9) continue;
    if (h(z) < best) best = h(z), arg = z;
  }
  return {arg, best};
}

}  // namespace oracle
