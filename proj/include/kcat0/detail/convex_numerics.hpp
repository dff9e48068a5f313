// Copyright 2026 The kcat0 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Membership-oracle numerics shared by the non-catalog domain nodes.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kcat0/core.hpp"

namespace kcat0::detail {

/// Largest t with z + s u inside for all s in [0, t). Bracketing by doubling,
/// then bisection; returns +inf when the ray stays inside past 1e12.
template <class Contains>
double bisect_exit(const Contains& contains, const CPoint& z, const CPoint& u) {
  const double un = norm(u);
  if (un == 0.0) return kInf;
  double lo = 0.0;
  double hi = 1e-3 * (1.0 + norm(z)) / un;
  while (contains(z + Complex(hi, 0.0) * u)) {
    lo = hi;
    hi *= 2.0;
    if (hi * un > 1e12) return kInf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (contains(z + Complex(mid, 0.0) * u))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exit distance for {r < 0} along z + t u, using values of the convex
/// function r: bracketing by doubling, then Illinois false position, with a
/// bisection step whenever the bracket fails to halve.
template <class R>
double root_exit(const R& r, const CPoint& z, const CPoint& u) {
  const double un = norm(u);
  if (un == 0.0) return kInf;
  auto f = [&](double t) { return r(z + Complex(t, 0.0) * u); };
  double lo = 0.0, flo = f(0.0);
  if (!(flo < 0.0)) return 0.0;
  double hi = 1e-3 * (1.0 + norm(z)) / un, fhi = f(hi);
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    if (hi * un > 1e12) return kInf;
    fhi = f(hi);
  }
  int side = 0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double width = hi - lo;
    double t = std::isfinite(fhi) ? (lo * fhi - hi * flo) / (fhi - flo) : 0.5 * (lo + hi);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double ft = f(t);
    if (ft < 0.0) {
      lo = t;
      flo = ft;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = t;
      fhi = ft;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (hi - lo > 0.5 * width) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      (fm < 0.0 ? lo : hi) = mid;
      (fm < 0.0 ? flo : fhi) = fm;
      side = 0;
    }
  }
  return lo;
}

/// Exit distance for {r < 0} with r convex and differentiable. Along the ray
/// f(t) = r(z + t u) is convex, so Newton steps started outside the set move
/// monotonically onto the root. The first outside point comes from the tangent
/// at 0 when f'(0) > 0, else from doubling. Falls back to root_exit when the
/// iteration misbehaves.
template <class R, class Grad>
double newton_exit(const R& r, const Grad& grad, const CPoint& z, const CPoint& u) {
  const double un = norm(u);
  if (un == 0.0) return kInf;
  auto f = [&](double t) { return r(z + Complex(t, 0.0) * u); };
  auto df = [&](double t) { return real_dot(grad(z + Complex(t, 0.0) * u), u); };
  const double f0 = f(0.0);
  if (!(f0 < 0.0)) return 0.0;
  double t = 0.0;
  const double d0 = df(0.0);
  if (d0 > 0.0) t = -f0 / d0;
  double ft = t > 0.0 ? f(t) : -1.0;
  if (!(ft >= 0.0)) {
    double lo = t;
    t = std::max(2.0 * t, 1e-3 * (1.0 + norm(z)) / un);
    while ((ft = f(t)) < 0.0) {
      lo = t;
      t *= 2.0;
      if (t * un > 1e12) return kInf;
    }
    (void)lo;
  }
  for (int it = 0; it < 60; ++it) {
    if (ft == 0.0) return t;
    const double d = df(t);
    if (!(d > 0.0) || !std::isfinite(d)) return root_exit(r, z, u);
    const double next = t - ft / d;
    if (!(next < t) || next < 0.0) break;
    const double fn = f(next);
    if (fn < 0.0) return t - next <= 1e-9 * t ? next : root_exit(r, z, u);
    const bool done = t - next <= 1e-15 * t;
    t = next;
    ft = fn;
    if (done) break;
  }
  return t;
}

/// Brent's minimizer on [a, b]; returns (f(x), x).
template <class F>
std::pair<double, double> brent_min(const F& f, double a, double b, double tol) {
  const double c = 0.5 * (3.0 - std::sqrt(5.0));
  double x = a + c * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < 100; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-12, tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv), q = (x - v) * (fx - fw), p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::isfinite(p) && std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m ? b : a) - x;
      d = c * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {fx, x};
}

/// Nearest boundary point of a planar convex set from an interior point:
/// minimizes the exit distance over the angle by sampling, then Brent
/// refinement around the best two samples.
template <class Exit>
std::pair<double, double> planar_min_exit(const Exit& exit, std::vector<double> seeds) {
  constexpr int kSamples = 16;
  std::vector<std::pair<double, double>> vals;
  for (int k = 0; k < kSamples; ++k) seeds.push_back(2.0 * kPi * k / kSamples);
  for (double a : seeds) vals.push_back({exit(a), a});
  std::sort(vals.begin(), vals.end());
  const double h = 2.0 * kPi / kSamples;
  double bestT = vals.front().first, bestA = vals.front().second;
  const std::size_t refine = std::min<std::size_t>(2, vals.size());
  for (std::size_t c = 0; c < refine; ++c) {
    if (!std::isfinite(vals[c].first)) break;
    const auto [t, ang] = brent_min(exit, vals[c].second - h, vals[c].second + h, 1e-8);
    if (t < bestT) {
      bestT = t;
      bestA = ang;
    }
  }
  return {bestT, bestA};
}

struct GenericBoundaryHit {
  double distance = kInf;
  CPoint point;
  CPoint normal;  // unit outward
};

/// Nearest boundary point of a convex set from an interior point z.
///
/// Descends on the sphere of directions: the exit distance along u is
/// minimized, and at a minimizer u coincides with the outward normal at the
/// hit point. Multi-start over the coordinate axes and the outward gradient.
template <class Exit, class Grad>
GenericBoundaryHit nearest_boundary_generic(const CPoint& z, const Exit& exit, const Grad& grad) {
  const std::size_t d = z.dim();
  std::vector<CPoint> starts;
  {
    CPoint g = grad(z);
    if (norm(g) > 0.0) starts.push_back(normalized(g));
  }
  for (std::size_t k = 0; k < d; ++k)
    for (Complex e : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
      CPoint u(d);
      u[k] = e;
      starts.push_back(u);
    }

  GenericBoundaryHit best;
  for (const CPoint& start : starts) {
    CPoint u = start;
    double t = exit(z, u);
    if (!std::isfinite(t)) continue;
    double step = 1.0;
    for (int it = 0; it < 400; ++it) {
      const CPoint q = z + Complex(t, 0.0) * u;
      CPoint n = grad(q);
      if (norm(n) == 0.0) break;
      n = normalized(n);
      if (norm(n - u) < 1e-13) break;
      bool improved = false;
      for (int ls = 0; ls < 40; ++ls) {
        const CPoint cand = normalized(u + Complex(step, 0.0) * (n - u));
        const double tc = exit(z, cand);
        if (tc < t) {
          u = cand;
          t = tc;
          improved = true;
          step = std::min(1.0, 2.0 * step);
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (t < best.distance) {
      best.distance = t;
      best.point = z + Complex(t, 0.0) * u;
      CPoint n = grad(best.point);
      best.normal = norm(n) > 0.0 ? normalized(n) : u;
    }
  }
  return best;
}

/// Deterministic quasi-uniform unit vectors in C^d (viewed as R^{2d}).
inline std::vector<CPoint> sphere_directions(std::size_t d, std::size_t count) {
  std::vector<CPoint> out;
  out.reserve(count);
  if (d == 1) {
    for (std::size_t k = 0; k < count; ++k)
      out.push_back(CPoint{std::polar(1.0, 2.0 * kPi * (static_cast<double>(k) + 0.5) / count)});
    return out;
  }
  if (d == 2) {
    // Hopf coordinates (cos e * e^{i a}, sin e * e^{i b}) with sin^2 e uniform.
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::cbrt(double(count))));
    const std::size_t ne = std::max<std::size_t>(1, count / (m * m));
    for (std::size_t i = 0; i < ne; ++i) {
      const double s2 = (static_cast<double>(i) + 0.5) / ne;
      const double e = std::asin(std::sqrt(s2));
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          const double pa = 2.0 * kPi * (a + 0.25) / m;
          const double pb = 2.0 * kPi * (b + 0.5 * (i % 2) + 0.25) / m;
          out.push_back(CPoint{std::polar(std::cos(e), pa), std::polar(std::sin(e), pb)});
        }
    }
    return out;
  }
  std::mt19937_64 rng(0x6b636174u);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    CPoint u(d);
    for (std::size_t i = 0; i < d; ++i) u[i] = Complex(g(rng), g(rng));
    out.push_back(normalized(u));
  }
  return out;
}

}  // namespace kcat0::detail
