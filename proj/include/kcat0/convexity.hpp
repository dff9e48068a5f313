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

// Boundary non-degeneracy: m-convexity sampling and line type.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kcat0/core.hpp"
#include "kcat0/defining_function.hpp"
#include "kcat0/detail/convex_numerics.hpp"
#include "kcat0/domain.hpp"

namespace kcat0 {

struct MConvexSample {
  CPoint z;
  CPoint v;
  double delta = 0.0;
  double deltaDir = 0.0;
};

struct MConvexityReport {
  std::vector<MConvexSample> samples;
  double fittedExponent = 0.0;
  double fittedConstant = 0.0;
  double windowRadius = kInf;
  std::optional<int> targetM;
  bool pass = false;
  std::vector<std::string> diagnostics;
};

namespace detail {

/// Least-squares line through (x_i, y_i); returns (slope, intercept).
inline std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error("degenerate-fit", "all abscissae coincide");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

}  // namespace detail

/// Log-log slope of delta_dir(z_eps, v) against delta(z_eps) along
/// z_eps = p + eps u.
inline MConvexityReport exponent_fit(const ConvexDomain& D, const CPoint& p, const CPoint& u, const CPoint& v,
                                     const std::vector<double>& epsGrid) {
  if (is_zero(v)) throw Error("zero-direction", "exponent_fit needs a nonzero tangent direction");
  MConvexityReport r;
  std::vector<double> lx, ly;
  for (double eps : epsGrid) {
    const CPoint z = p + Complex(eps, 0.0) * u;
    if (!D.contains(z)) continue;
    const double dl = D.delta(z), dd = D.delta_dir(z, v);
    if (!(dl > 0.0) || !std::isfinite(dd)) continue;
    r.samples.push_back({z, v, dl, dd});
    lx.push_back(std::log(dl));
    ly.push_back(std::log(dd));
  }
  if (r.samples.size() < 3) throw Error("too-few-samples", "exponent_fit needs at least 3 valid samples");
  const auto [slope, intercept] = detail::fit_line(lx, ly);
  r.fittedExponent = slope;
  r.fittedConstant = std::exp(intercept);
  r.pass = true;
  return r;
}

/// Samples delta_dir(z, v) / delta(z)^{1/m} on B(0, R) and near the boundary.
/// The empirical constant is the sup of that ratio. The check fails when the
/// ratio keeps growing as delta shrinks, or when a supplied C is exceeded.
inline MConvexityReport local_m_convex_check(const ConvexDomain& D, double R, int m, int sampleCount,
                                             std::uint64_t seed, std::optional<double> C = std::nullopt) {
  if (m < 1) throw Error("bad-m", "m must be a positive integer");
  if (!D.c_proper()) throw Error("pseudo-distance-only", "m-convexity check needs a C-proper domain");
  const std::size_t d = D.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-R, R);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&]() {
    CPoint w(d);
    for (std::size_t k = 0; k < d; ++k) w[k] = Complex(gauss(rng), gauss(rng));
    return normalized(w);
  };
  auto random_interior = [&]() -> std::optional<CPoint> {
    for (int tries = 0; tries < 20000; ++tries) {
      CPoint z(d);
      for (std::size_t k = 0; k < d; ++k) z[k] = Complex(box(rng), box(rng));
      if (norm(z) < R && D.contains(z)) return z;
    }
    return std::nullopt;
  };

  MConvexityReport r;
  r.windowRadius = R;
  r.targetM = m;
  auto record = [&](const CPoint& z, const CPoint& v) {
    if (!(norm(z) < R) || !D.contains(z)) return;
    const double dl = D.delta(z);
    const double dd = D.delta_dir(z, v);
    if (dl > 0.0 && std::isfinite(dd)) r.samples.push_back({z, v, dl, dd});
  };

  for (int i = 0; i < sampleCount; ++i) {
    auto z = random_interior();
    if (!z) break;
    record(*z, random_unit());
    // Walk to the boundary and back off along the normal over several decades.
    const CPoint u = random_unit();
    const double t = D.ray_exit(*z, u);
    if (!std::isfinite(t)) continue;
    const CPoint q = *z + Complex(t, 0.0) * u;
    CPoint n = D.gauge_gradient(q);
    if (norm(n) == 0.0) continue;
    n = normalized(n);
    CPoint tangent = random_unit();
    tangent = tangent - hermitian(tangent, n) * n;
    if (d > 1 && norm(tangent) > 1e-12) tangent = normalized(tangent);
    for (double eps = 1e-1; eps >= 0.99e-6; eps *= 0.1) {
      const CPoint ze = q - Complex(eps, 0.0) * n;
      record(ze, random_unit());
      if (d > 1 && norm(tangent) > 1e-12) record(ze, tangent);
    }
  }
  if (r.samples.empty()) throw Error("empty-window", "no interior samples found in the window");

  const double inv = 1.0 / m;
  std::map<int, double> band;
  double sup = 0.0;
  std::vector<double> lx, ly;
  for (const auto& s : r.samples) {
    const double ratio = s.deltaDir / std::pow(s.delta, inv);
    sup = std::max(sup, ratio);
    const int decade = static_cast<int>(std::floor(std::log10(s.delta)));
    band[decade] = std::max(band[decade], ratio);
    lx.push_back(std::log(s.delta));
    ly.push_back(std::log(s.deltaDir));
  }
  r.fittedConstant = sup;
  if (lx.size() >= 2) {
    try {
      r.fittedExponent = detail::fit_line(lx, ly).first;
    } catch (const Error&) {
      r.fittedExponent = 0.0;
    }
  }
  r.pass = true;
  if (band.size() >= 2) {
    const double small = band.begin()->second;
    const double large = band.rbegin()->second;
    if (small > 1.5 * large) {
      r.pass = false;
      r.diagnostics.push_back("unbounded-C: ratio grows as the boundary is approached");
    }
  }
  if (C && sup > *C) {
    r.pass = false;
    r.diagnostics.push_back("supplied constant violated");
  }
  return r;
}

enum class OrderMethod { Auto, Symbolic, Numeric };

/// Marker for orders beyond the cap.
inline constexpr int kInfiniteOrder = -1;

namespace detail {

inline int symbolic_order(const RealPolynomial& p, const CPoint& x, const CPoint& w) {
  const auto coeffs = p.restrict_to_line(x, w);
  double scale = 0.0;
  for (const auto& [k, c] : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return kInfiniteOrder;
  std::map<int, double> byDegree;
  for (const auto& [k, c] : coeffs) byDegree[k.first + k.second] = std::max(byDegree[k.first + k.second], std::abs(c));
  for (const auto& [deg, c] : byDegree)
    if (deg > 0 && c > 1e-12 * scale) return deg;
  return kInfiniteOrder;
}

inline int numeric_order(const DefiningFunction& r, const CPoint& x, const CPoint& w, int cap) {
  std::vector<double> lx, ly;
  for (int k = 0; k <= 6; ++k) {
    const double rho = std::pow(10.0, -2.0 - 0.5 * k);
    double g = 0.0;
    for (int a = 0; a < 8; ++a) g = std::max(g, std::abs(r(x + std::polar(rho, 2.0 * kPi * (a + 0.125) / 8.0) * w)));
    if (!(g > 0.0) || !std::isfinite(g)) return kInfiniteOrder;
    lx.push_back(std::log(rho));
    ly.push_back(std::log(g));
  }
  const double slope = fit_line(lx, ly).first;
  if (slope > cap + 0.5) return kInfiniteOrder;
  const double rounded = std::round(slope);
  if (std::abs(slope - rounded) >= 0.1 || rounded < 1.0)
    throw Error("order-not-resolved", "numeric vanishing order is not integral (slope " + std::to_string(slope) + ")");
  return static_cast<int>(rounded);
}

}  // namespace detail

/// Order of vanishing of r along t -> x + t w at t = 0, or kInfiniteOrder.
inline int vanishing_order(const DefiningFunction& r, const CPoint& x, const CPoint& w,
                           OrderMethod method = OrderMethod::Auto, int cap = 16) {
  require_dim(x, r.dim, "vanishing_order");
  require_dim(w, r.dim, "vanishing_order direction");
  if (is_zero(w)) throw Error("zero-direction", "vanishing_order needs a non-trivial line");
  const double g = norm(r.gradient(x));
  if (std::abs(r(x)) > 1e-9 * (1.0 + g)) throw Error("not-on-boundary", "line does not pass through the boundary");
  const bool symbolic = method == OrderMethod::Symbolic || (method == OrderMethod::Auto && r.polynomial);
  if (symbolic) {
    if (!r.polynomial) throw Error("no-polynomial", "symbolic order needs a polynomial defining function");
    const int k = detail::symbolic_order(*r.polynomial, x, w);
    return k > cap ? kInfiniteOrder : k;
  }
  return detail::numeric_order(r, x, w, cap);
}

struct LineTypeResult {
  CPoint basePoint;
  int L = 0;
  bool infinite = false;
  CPoint extremalDirection;
  std::vector<std::pair<CPoint, int>> perLineOrders;
};

/// Line type at a boundary point: sup of vanishing orders over complex
/// tangent lines, searched on a direction grid with local refinement.
inline LineTypeResult line_type(const DefiningFunction& r, const CPoint& x, int gridSize = 256,
                                OrderMethod method = OrderMethod::Auto, int cap = 16, std::uint64_t seed = 7) {
  require_dim(x, r.dim, "line_type");
  const CPoint G = r.gradient(x);
  if (norm(G) == 0.0) throw Error("degenerate-gradient", "gradient of r vanishes: not a defining function here");
  const std::size_t d = r.dim;
  const CPoint nrm = normalized(G);
  LineTypeResult out;
  out.basePoint = x;
  if (d == 1) {
    // Only the transverse line exists.
    const int k = vanishing_order(r, x, CPoint{1.0}, method, cap);
    out.perLineOrders.push_back({CPoint{1.0}, k});
    out.L = k;
    out.infinite = k == kInfiniteOrder;
    out.extremalDirection = CPoint{1.0};
    return out;
  }
  // Orthonormal basis of the complex tangent space {w : <w, G> = 0}.
  std::vector<CPoint> basis;
  for (std::size_t k = 0; k < d && basis.size() + 1 < d; ++k) {
    CPoint e(d);
    e[k] = 1.0;
    e = e - hermitian(e, nrm) * nrm;
    for (const auto& b : basis) e = e - hermitian(e, b) * b;
    if (norm(e) > 1e-8) basis.push_back(normalized(e));
  }
  auto embed = [&](const CPoint& c) {
    CPoint w(d);
    for (std::size_t k = 0; k < basis.size(); ++k) w = w + c[k] * basis[k];
    return w;
  };
  auto order_of = [&](const CPoint& w) {
    const int k = vanishing_order(r, x, w, method, cap);
    return k == kInfiniteOrder ? cap + 1 : k;
  };
  int best = 0;
  CPoint bestDir;
  CPoint bestCoords;
  auto consider = [&](const CPoint& c) {
    const CPoint w = embed(c);
    const int k = order_of(w);
    out.perLineOrders.push_back({w, k > cap ? kInfiniteOrder : k});
    if (k > best) {
      best = k;
      bestDir = w;
      bestCoords = c;
    }
  };
  // Orders are invariant under complex rescaling, so one complex tangent
  // dimension is a single line.
  const std::size_t count = basis.size() == 1 ? 1 : static_cast<std::size_t>(gridSize);
  for (const auto& c : detail::sphere_directions(basis.size(), count)) consider(c);
  // High orders typically sit on exact coordinate-like lines, which a grid
  // almost surely misses.
  if (basis.size() > 1)
    for (std::size_t k = 0; k < basis.size(); ++k) {
      CPoint c(basis.size());
      c[k] = 1.0;
      consider(c);
    }
  if (basis.size() > 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    double radius = 0.25;
    for (int round = 0; round < 3; ++round, radius *= 0.25) {
      const CPoint center = bestCoords;
      for (int i = 0; i < 32; ++i) {
        CPoint c = center;
        for (std::size_t k = 0; k < c.dim(); ++k) c[k] += radius * Complex(g(rng), g(rng));
        if (norm(c) > 0.0) consider(normalized(c));
      }
    }
  }
  out.infinite = best > cap;
  out.L = out.infinite ? kInfiniteOrder : best;
  out.extremalDirection = bestDir;
  return out;
}

}  // namespace kcat0
