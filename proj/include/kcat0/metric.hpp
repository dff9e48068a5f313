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

// Kobayashi distance engine.
//
// Catalog compositions (planar charts, balls, polydisks, products, affine
// images of these) are evaluated in closed form. Everything else gets a
// certified interval: lower bounds from holomorphic maps out of the domain
// (inclusions into members, supporting complex half-planes), upper bounds from
// maps into it (slices, inscribed disks) integrated along optimized paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcat0/core.hpp"
#include "kcat0/domain.hpp"
#include "kcat0/planar.hpp"

namespace kcat0 {

struct DistanceInterval {
  double lo = 0.0;
  double hi = 0.0;
  MethodSet methods;
  std::vector<std::string> warnings;

  bool exact() const { return lo == hi; }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }

  static DistanceInterval exact_value(double v, MethodSet m) { return DistanceInterval{v, v, m, {}}; }
};

struct DiscretePath {
  std::vector<CPoint> nodes;
  std::vector<double> params;

  static DiscretePath straight(const CPoint& x, const CPoint& y, std::size_t count) {
    DiscretePath p;
    if (count < 2) {
      p.nodes = {x};
      p.params = {0.0};
      return p;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      p.nodes.push_back(x + Complex(t, 0.0) * (y - x));
      p.params.push_back(t);
    }
    return p;
  }
};

struct MetricOptions {
  int movableNodes = 33;
  int gaussPointsPerSegment = 4;
  double relImprovement = 1e-6;
  int patience = 5;
  int maxIterations = 300;
  bool optimizePath = true;
  int halfPlaneDirections = 64;
};

namespace detail {

/// Gauss-Legendre nodes and weights on [0, 1].
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static thread_local std::vector<std::pair<std::vector<double>, std::vector<double>>> cache(65);
  if (n < 1 || n > 64) throw Error("bad-quadrature", "Gauss-Legendre order must lie in [1, 64]");
  auto& entry = cache[static_cast<std::size_t>(n)];
  if (!entry.first.empty()) return entry;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = z;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  entry = {x, w};
  return entry;
}

/// Nelder-Mead on R^n; returns the best vertex and its value.
template <class F>
std::pair<std::vector<double>, double> minimize_simplex(const std::vector<double>& start,
                                                        const std::vector<double>& steps, const F& f, int maxIter,
                                                        double target = -kInf) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 1; i <= n; ++i) simplex[i][i - 1] += steps[i - 1];
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i <= n; ++i) val[i] = f(simplex[i]);
  std::vector<std::size_t> order(n + 1);
  for (int it = 0; it < maxIter; ++it) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    {
      auto s2 = simplex;
      auto v2 = val;
      for (std::size_t i = 0; i <= n; ++i) {
        simplex[i] = std::move(s2[order[i]]);
        val[i] = v2[order[i]];
      }
    }
    if (val[0] <= target) break;
    if (std::isfinite(val[n]) && val[n] - val[0] <= 1e-15 * (std::abs(val[0]) + 1e-300)) break;
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) c[k] += simplex[i][k] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (simplex[n][k] - c[k]);
      return p;
    };
    auto r = along(-1.0);
    const double fr = f(r);
    if (fr < val[0]) {
      auto e = along(-2.0);
      const double fe = f(e);
      if (fe < fr) {
        simplex[n] = std::move(e);
        val[n] = fe;
      } else {
        simplex[n] = std::move(r);
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      simplex[n] = std::move(r);
      val[n] = fr;
    } else {
      auto cc = along(fr < val[n] ? -0.5 : 0.5);
      const double fc = f(cc);
      if (fc < std::min(fr, val[n])) {
        simplex[n] = std::move(cc);
        val[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          val[i] = f(simplex[i]);
        }
      }
    }
  }
  std::size_t bi = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (val[i] < val[bi]) bi = i;
  return {simplex[bi], val[bi]};
}

/// 1 - |w|^2 / R^2 computed without cancellation from R - |w|.
inline double one_minus_scaled2(double absw, double R) { return (R - absw) * (R + absw) / (R * R); }

inline double ball_metric(const BallNode& n, const CPoint& z, const CPoint& v) {
  const CPoint a = z - n.center;
  const double s = one_minus_scaled2(norm(a), n.radius);
  const double R = n.radius;
  const double vv = norm2(v) / (R * R);
  const double av = std::norm(hermitian(a, v)) / (R * R * R * R);
  return std::sqrt(vv / s + av / (s * s));
}

/// Unit-ball automorphism exchanging 0 and a (an involution).
inline CPoint ball_involution(const CPoint& a, const CPoint& z) {
  const double aa = norm2(a);
  if (aa == 0.0) return -1.0 * z;
  const Complex za = hermitian(z, a);
  const CPoint Pz = (za / aa) * a;
  const CPoint Qz = z - Pz;
  const double sa = std::sqrt((1.0 - std::sqrt(aa)) * (1.0 + std::sqrt(aa)));
  CPoint num = a - Pz - Complex(sa, 0.0) * Qz;
  return (1.0 / (1.0 - za)) * num;
}

inline double ball_distance(const BallNode& n, const CPoint& x, const CPoint& y) {
  if (x == y) return 0.0;
  const double R = n.radius;
  const CPoint a = (1.0 / R) * (x - n.center);
  const CPoint b = (1.0 / R) * (y - n.center);
  const Complex den = 1.0 - hermitian(a, b);
  const double sa = one_minus_scaled2(norm(x - n.center), R);
  const double sb = one_minus_scaled2(norm(y - n.center), R);
  const double one = sa * sb / std::norm(den);
  const double rho = std::sqrt(std::max(0.0, 1.0 - one));
  return artanh_from(rho, one);
}

inline double disk_metric_radius(Complex w, double r, Complex v) {
  const double aw = std::abs(w);
  return r * std::abs(v) / ((r - aw) * (r + aw));
}

/// Largest radius of a disk tangent at q with inward direction u that stays
/// inside the planar catalog piece.
inline double max_tangent_radius(const ConvexDomain& piece, Complex q, Complex u) {
  auto halfplane = [&](Complex p, Complex n) {
    const double h = std::max(0.0, halfplane_signed(q, p, n));
    const double c = (u * std::conj(n)).real();
    if (c >= 1.0 - 1e-15) return kInf;
    return h / (1.0 - c);
  };
  if (const auto* n = piece.as<DiskNode>()) {
    const Complex a = q - n->center;
    const double r = n->radius;
    const double denom = 2.0 * (r + (a * std::conj(u)).real());
    const double num = (r - std::abs(a)) * (r + std::abs(a));
    if (denom <= 0.0) return num >= 0.0 ? r : 0.0;
    return std::min(r, std::max(0.0, num) / denom);
  }
  if (const auto* n = piece.as<HalfPlaneNode>()) return halfplane(n->point, n->normal);
  if (const auto* n = piece.as<SectorNode>())
    return std::min(halfplane(n->vertex, n->normal_alpha()), halfplane(n->vertex, n->normal_beta()));
  throw Error("not-planar-catalog", "tangent disk radius needs a planar catalog piece");
}

/// k_S(0; 1) <= k of the largest disk tangent to S at its nearest boundary point.
inline double inscribed_disk_metric(const PlanarSlice& S) {
  const BoundaryPoint bp = S.nearest_boundary(0.0);
  const double delta = bp.distance;
  const Complex q = bp.point[0];
  const Complex u = -q / std::abs(q);
  double rho = kInf;
  for (const auto& piece : S.pieces()) rho = std::min(rho, max_tangent_radius(piece, q, u));
  rho = std::max(rho, delta);
  if (!std::isfinite(rho)) return 1.0 / (2.0 * delta);
  return 1.0 / (2.0 * delta - delta * delta / rho);
}

/// Lexicographic order on (Re, Im) of each coordinate.
inline bool lex_less(const CPoint& a, const CPoint& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

inline void require_metric_point(const ConvexDomain& D, const CPoint& z, const char* what) {
  require_dim(z, D.dim(), what);
  if (!D.contains(z)) throw Error("outside-domain", std::string(what) + ": point is not inside the domain");
}

}  // namespace detail

/// Closed-form infinitesimal metric where one exists.
inline std::optional<double> exact_infinitesimal(const ConvexDomain& D, const CPoint& z, const CPoint& v,
                                                 MethodSet* tags = nullptr) {
  auto tag = [&](Method m) {
    if (tags) *tags |= m;
  };
  switch (D.kind()) {
    case DomainKind::Disk:
    case DomainKind::HalfPlane:
    case DomainKind::Sector:
      tag(Method::ExactChart);
      return chart(D).metric(z[0], v[0]);
    case DomainKind::Ball:
      tag(Method::ExactChart);
      return detail::ball_metric(*D.as<BallNode>(), z, v);
    case DomainKind::Polydisk: {
      const auto* n = D.as<PolydiskNode>();
      double k = 0.0;
      for (std::size_t i = 0; i < z.dim(); ++i)
        k = std::max(k, detail::disk_metric_radius(z[i] - n->centers[i], n->radii[i], v[i]));
      tag(Method::ProductMax);
      return k;
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      const std::size_t k = n->left.dim();
      MethodSet local;
      auto l = exact_infinitesimal(n->left, z.head(k), v.head(k), &local);
      auto r = exact_infinitesimal(n->right, z.tail(k), v.tail(k), &local);
      if (!l || !r) return std::nullopt;
      if (tags) *tags |= local | Method::ProductMax;
      return std::max(*l, *r);
    }
    case DomainKind::AffineImage: {
      const auto* n = D.as<AffineImageNode>();
      MethodSet local;
      auto k = exact_infinitesimal(n->inner, n->to_inner(z), n->Ainv * v, &local);
      if (k && tags) *tags |= local | Method::AffineInvariance;
      return k;
    }
    default:
      return std::nullopt;
  }
}

/// Kobayashi infinitesimal metric k_D(z; v) as a certified interval.
inline DistanceInterval infinitesimal(const ConvexDomain& D, const CPoint& z, const CPoint& v) {
  detail::require_metric_point(D, z, "infinitesimal");
  require_dim(v, D.dim(), "infinitesimal direction");
  if (is_zero(v)) return DistanceInterval::exact_value(0.0, Method::ExactChart);
  MethodSet tags;
  if (auto k = exact_infinitesimal(D, z, v, &tags)) return DistanceInterval::exact_value(*k, tags);

  if (const auto* n = D.as<ProductNode>()) {
    const std::size_t k = n->left.dim();
    DistanceInterval l = is_zero(v.head(k)) ? DistanceInterval{} : infinitesimal(n->left, z.head(k), v.head(k));
    DistanceInterval r = is_zero(v.tail(k)) ? DistanceInterval{} : infinitesimal(n->right, z.tail(k), v.tail(k));
    DistanceInterval out{std::max(l.lo, r.lo), std::max(l.hi, r.hi), l.methods | r.methods | Method::ProductMax, {}};
    return out;
  }
  if (const auto* n = D.as<AffineImageNode>()) {
    DistanceInterval in = infinitesimal(n->inner, n->to_inner(z), n->Ainv * v);
    in.methods |= Method::AffineInvariance;
    return in;
  }

  // Convex two-sided estimate |v| / (2 delta_v) <= k <= |v| / delta_v, in slice units.
  const double s = D.slice_delta(z, v);
  if (!std::isfinite(s)) {
    DistanceInterval out{0.0, 0.0, Method::DeltaBound, {"complex line contained in domain"}};
    return out;
  }
  DistanceInterval out{0.5 / s, 1.0 / s, Method::DeltaBound, {}};
  if (const auto* n = D.as<IntersectionNode>()) {
    for (const auto& m : n->members) {
      const DistanceInterval km = infinitesimal(m, z, v);
      if (km.lo > out.lo) {
        out.lo = km.lo;
        out.methods |= Method::ProjectionLower;
      }
    }
    const PlanarSlice S = D.slice(z, v);
    if (!S.numeric() && !S.pieces().empty()) {
      const double up = detail::inscribed_disk_metric(S);
      if (up < out.hi) {
        out.hi = up;
        out.methods |= Method::InclusionUpper;
      }
    }
  }
  if (out.lo > out.hi) out.lo = out.hi;
  return out;
}

/// Closed-form Kobayashi distance where one exists.
inline std::optional<double> exact_distance(const ConvexDomain& D, const CPoint& x, const CPoint& y,
                                            MethodSet* tags = nullptr) {
  auto tag = [&](MethodSet m) {
    if (tags) *tags |= m;
  };
  switch (D.kind()) {
    case DomainKind::Disk:
    case DomainKind::HalfPlane:
    case DomainKind::Sector:
      tag(Method::ExactChart);
      return chart(D).distance(x[0], y[0]);
    case DomainKind::Ball:
      tag(Method::ExactChart);
      return detail::ball_distance(*D.as<BallNode>(), x, y);
    case DomainKind::Polydisk: {
      const auto* n = D.as<PolydiskNode>();
      double d = 0.0;
      for (std::size_t i = 0; i < x.dim(); ++i)
        d = std::max(d, disk_distance((x[i] - n->centers[i]) / n->radii[i], (y[i] - n->centers[i]) / n->radii[i]));
      tag(Method::ProductMax);
      return d;
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      const std::size_t k = n->left.dim();
      MethodSet local;
      auto l = exact_distance(n->left, x.head(k), y.head(k), &local);
      auto r = exact_distance(n->right, x.tail(k), y.tail(k), &local);
      if (!l || !r) return std::nullopt;
      tag(local | Method::ProductMax);
      return std::max(*l, *r);
    }
    case DomainKind::AffineImage: {
      const auto* n = D.as<AffineImageNode>();
      MethodSet local;
      auto d = exact_distance(n->inner, n->to_inner(x), n->to_inner(y), &local);
      if (d) tag(local | Method::AffineInvariance);
      return d;
    }
    default:
      return std::nullopt;
  }
}

/// Length of the piecewise-linear path under the infinitesimal interval.
inline DistanceInterval curve_length(const ConvexDomain& D, const DiscretePath& path, const MetricOptions& opt = {}) {
  for (const auto& node : path.nodes) detail::require_metric_point(D, node, "curve_length");
  DistanceInterval out;
  if (path.nodes.size() < 2) return out;
  const auto& [gx, gw] = detail::gauss_legendre(opt.gaussPointsPerSegment);
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    const CPoint v = path.nodes[i + 1] - path.nodes[i];
    if (is_zero(v)) continue;
    for (std::size_t j = 0; j < gx.size(); ++j) {
      const DistanceInterval k = infinitesimal(D, path.nodes[i] + Complex(gx[j], 0.0) * v, v);
      out.lo += gw[j] * k.lo;
      out.hi += gw[j] * k.hi;
      out.methods |= k.methods;
    }
  }
  return out;
}

namespace detail {

inline double upper_segment_cost(const ConvexDomain& D, const CPoint& a, const CPoint& b, int gaussPoints) {
  const CPoint v = b - a;
  if (is_zero(v)) return 0.0;
  const auto& [gx, gw] = gauss_legendre(gaussPoints);
  double s = 0.0;
  for (std::size_t j = 0; j < gx.size(); ++j) s += gw[j] * infinitesimal(D, a + Complex(gx[j], 0.0) * v, v).hi;
  return s;
}

/// m nodes at equal metric arclength along a piecewise-linear path.
inline std::vector<CPoint> constant_speed(const ConvexDomain& D, const DiscretePath& p, std::size_t m,
                                          int gaussPoints) {
  const auto& ns = p.nodes;
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i + 1 < ns.size(); ++i)
    cum.push_back(cum.back() + upper_segment_cost(D, ns[i], ns[i + 1], gaussPoints));
  std::vector<CPoint> out{ns.front()};
  std::size_t seg = 0;
  for (std::size_t j = 1; j + 1 < m; ++j) {
    const double target = cum.back() * static_cast<double>(j) / static_cast<double>(m - 1);
    while (seg + 2 < ns.size() && cum[seg + 1] < target) ++seg;
    const double w = cum[seg + 1] - cum[seg];
    const double t = w > 0.0 ? std::clamp((target - cum[seg]) / w, 0.0, 1.0) : 0.0;
    out.push_back(ns[seg] + Complex(t, 0.0) * (ns[seg + 1] - ns[seg]));
  }
  out.push_back(ns.back());
  return out;
}

}  // namespace detail

/// Numeric geodesic: L-BFGS on the discrete energy sum of squared segment
/// lengths over interior node positions, starting from the segment. The
/// energy has the length minimizers as constant-speed critical points.
inline std::pair<DiscretePath, DistanceInterval> geodesic_approx(const ConvexDomain& D, const CPoint& x,
                                                                 const CPoint& y, int nodeCount,
                                                                 const MetricOptions& opt = {}) {
  detail::require_metric_point(D, x, "geodesic_approx");
  detail::require_metric_point(D, y, "geodesic_approx");
  if (x == y) {
    DiscretePath p = DiscretePath::straight(x, y, 1);
    return {p, DistanceInterval::exact_value(0.0, Method::PathOptimizer)};
  }
  if (nodeCount < 3) throw Error("bad-node-count", "geodesic_approx needs at least 3 nodes");
  // The max metric is not smooth where the factors tie, so each factor is
  // optimized alone. Running both factor polylines at constant speed gives a
  // path in D of length max(L1, L2); the returned nodes sample that path.
  if (const auto* n = D.as<ProductNode>()) {
    const std::size_t k = n->left.dim(), m = static_cast<std::size_t>(nodeCount);
    DistanceInterval len;
    auto factor = [&](const ConvexDomain& F, const CPoint& a, const CPoint& b) {
      if (a == b) return std::vector<CPoint>(m, a);
      auto [fp, fl] = geodesic_approx(F, a, b, nodeCount, opt);
      len.lo = std::max(len.lo, fl.lo);
      len.hi = std::max(len.hi, fl.hi);
      len.methods |= fl.methods;
      len.warnings.insert(len.warnings.end(), fl.warnings.begin(), fl.warnings.end());
      return detail::constant_speed(F, fp, m, opt.gaussPointsPerSegment);
    };
    const auto l = factor(n->left, x.head(k), y.head(k));
    const auto r = factor(n->right, x.tail(k), y.tail(k));
    DiscretePath path;
    for (std::size_t i = 0; i < m; ++i) path.nodes.push_back(CPoint::join(l[i], r[i]));
    len.methods |= Method::PathOptimizer;
    len.methods |= Method::ProductMax;
    return {path, len};
  }
  DiscretePath path = DiscretePath::straight(x, y, static_cast<std::size_t>(nodeCount));
  auto& nodes = path.nodes;
  const std::size_t m = nodes.size();
  const std::size_t d = D.dim();
  const std::size_t nv = 2 * d * (m - 2);
  const int gp = opt.gaussPointsPerSegment;

  auto pack = [&](const std::vector<CPoint>& ns) {
    std::vector<double> v(nv);
    for (std::size_t i = 1; i + 1 < m; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        v[2 * (d * (i - 1) + k)] = ns[i][k].real();
        v[2 * (d * (i - 1) + k) + 1] = ns[i][k].imag();
      }
    return v;
  };
  auto unpack = [&](const std::vector<double>& v) {
    std::vector<CPoint> ns = nodes;
    for (std::size_t i = 1; i + 1 < m; ++i)
      for (std::size_t k = 0; k < d; ++k)
        ns[i][k] = Complex(v[2 * (d * (i - 1) + k)], v[2 * (d * (i - 1) + k) + 1]);
    return ns;
  };
  // Segment costs, or empty when a node leaves D.
  auto segments = [&](const std::vector<CPoint>& ns) {
    std::vector<double> s(m - 1);
    for (std::size_t i = 1; i + 1 < m; ++i)
      if (!D.contains(ns[i])) return std::vector<double>{};
    for (std::size_t i = 0; i + 1 < m; ++i) s[i] = detail::upper_segment_cost(D, ns[i], ns[i + 1], gp);
    return s;
  };
  auto energy = [&](const std::vector<double>& s) {
    double e = 0.0;
    for (double v : s) e += v * v;
    return e * static_cast<double>(m - 1);
  };
  auto length = [](const std::vector<double>& s) {
    double t = 0.0;
    for (double v : s) t += v;
    return t;
  };
  // Moving node i only touches segments i-1 and i; forward differences reuse
  // the current segment costs.
  auto gradient = [&](const std::vector<CPoint>& ns, const std::vector<double>& s) {
    std::vector<double> g(nv, 0.0);
    const double w = static_cast<double>(m - 1);
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const double h = 1e-7 * (1.0 + norm(ns[i]));
      const double base = (s[i - 1] * s[i - 1] + s[i] * s[i]) * w;
      for (std::size_t k = 0; k < d; ++k)
        for (int c = 0; c < 2; ++c) {
          const Complex e = c == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
          CPoint p = ns[i];
          p[k] += h * e;
          double sign = 1.0;
          if (!D.contains(p)) {
            p = ns[i];
            p[k] -= h * e;
            sign = -1.0;
            if (!D.contains(p)) continue;
          }
          const double a = detail::upper_segment_cost(D, ns[i - 1], p, gp);
          const double b = detail::upper_segment_cost(D, p, ns[i + 1], gp);
          g[2 * (d * (i - 1) + k) + c] = sign * ((a * a + b * b) * w - base) / h;
        }
    }
    return g;
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  std::vector<double> seg = segments(nodes);
  const double initial = length(seg);
  double current = initial;
  double E = energy(seg);
  std::vector<double> X = pack(nodes), G = gradient(nodes, seg);
  std::deque<std::pair<std::vector<double>, std::vector<double>>> memory;
  const double scale = norm(y - x);
  int quiet = 0;

  for (int it = 0; it < opt.maxIterations && quiet < opt.patience; ++it) {
    // Two-loop recursion.
    std::vector<double> q = G;
    std::vector<double> alpha(memory.size());
    for (std::size_t j = memory.size(); j-- > 0;) {
      const auto& [sj, yj] = memory[j];
      alpha[j] = dot(sj, q) / dot(yj, sj);
      for (std::size_t t = 0; t < nv; ++t) q[t] -= alpha[j] * yj[t];
    }
    if (!memory.empty()) {
      const auto& [sl, yl] = memory.back();
      const double gamma = dot(sl, yl) / dot(yl, yl);
      for (double& v : q) v *= gamma;
    } else {
      const double gn = std::sqrt(dot(G, G));
      if (gn == 0.0) break;
      for (double& v : q) v *= 1e-2 * scale / gn;
    }
    for (std::size_t j = 0; j < memory.size(); ++j) {
      const auto& [sj, yj] = memory[j];
      const double beta = dot(yj, q) / dot(yj, sj);
      for (std::size_t t = 0; t < nv; ++t) q[t] += (alpha[j] - beta) * sj[t];
    }
    double slope = -dot(G, q);
    if (!(slope < 0.0)) {
      memory.clear();
      q = G;
      const double gn = std::sqrt(dot(G, G));
      if (gn == 0.0) break;
      for (double& v : q) v *= 1e-2 * scale / gn;
      slope = -dot(G, q);
    }
    double t = 1.0;
    bool accepted = false;
    std::vector<double> Xn;
    std::vector<CPoint> trial;
    std::vector<double> ts;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      Xn = X;
      for (std::size_t j = 0; j < nv; ++j) Xn[j] -= t * q[j];
      trial = unpack(Xn);
      ts = segments(trial);
      if (ts.empty()) continue;
      if (energy(ts) <= E + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const std::vector<double> Gn = gradient(trial, ts);
    std::vector<double> sv(nv), yv(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      sv[j] = Xn[j] - X[j];
      yv[j] = Gn[j] - G[j];
    }
    if (dot(sv, yv) > 1e-300) {
      memory.emplace_back(std::move(sv), std::move(yv));
      if (memory.size() > 8) memory.pop_front();
    }
    X = std::move(Xn);
    G = Gn;
    E = energy(ts);
    const double tv = length(ts);
    const double rel = (current - tv) / current;
    if (tv < current) {
      nodes = trial;
      seg = ts;
    }
    quiet = std::abs(rel) < opt.relImprovement ? quiet + 1 : 0;
    current = std::min(current, tv);
  }

  DistanceInterval len = curve_length(D, path, opt);
  len.methods |= Method::PathOptimizer;
  if (!(current < initial)) len.warnings.push_back("optimizer-no-improvement");
  return {path, len};
}

namespace detail {

/// Supporting complex half-plane bound: for a boundary point q with outward
/// normal n, z -> <z - q, n> maps D into {Re < 0}.
inline double halfplane_lower(const CPoint& q, const CPoint& n, const CPoint& x, const CPoint& y) {
  const Complex a = -hermitian(x - q, n);
  const Complex b = -hermitian(y - q, n);
  if (!(a.real() > 0.0) || !(b.real() > 0.0)) return 0.0;
  // Right half-plane distance, rotated into the upper half-plane.
  return upper_half_plane_distance(Complex(0.0, 1.0) * a, Complex(0.0, 1.0) * b);
}

}  // namespace detail

DistanceInterval distance(const ConvexDomain& D, const CPoint& x, const CPoint& y, const MetricOptions& opt = {});

/// Best lower bound from holomorphic maps out of D: inclusions into members
/// and supporting complex half-planes.
inline double projection_lower(const ConvexDomain& D, const CPoint& x, const CPoint& y,
                               const MetricOptions& opt = {}) {
  if (auto e = exact_distance(D, x, y)) return *e;
  if (const auto* n = D.as<ProductNode>()) {
    const std::size_t k = n->left.dim();
    return std::max(projection_lower(n->left, x.head(k), y.head(k), opt),
                    projection_lower(n->right, x.tail(k), y.tail(k), opt));
  }
  if (const auto* n = D.as<AffineImageNode>()) return projection_lower(n->inner, n->to_inner(x), n->to_inner(y), opt);

  double lo = 0.0;
  if (const auto* n = D.as<IntersectionNode>())
    for (const auto& mem : n->members) lo = std::max(lo, projection_lower(mem, x, y, opt));

  std::vector<BoundaryPoint> support;
  const CPoint mid = 0.5 * (x + y);
  for (const CPoint* p : {&x, &y, &mid}) support.push_back(D.nearest_boundary(*p));
  std::vector<CPoint> dirs = detail::sphere_directions(D.dim(), static_cast<std::size_t>(opt.halfPlaneDirections));
  const CPoint chord = y - x;
  dirs.push_back(chord);
  dirs.push_back(-1.0 * chord);
  dirs.push_back(Complex(0.0, 1.0) * chord);
  dirs.push_back(Complex(0.0, -1.0) * chord);
  for (const auto& u : dirs) {
    const double t = D.ray_exit(mid, u);
    if (!std::isfinite(t)) continue;
    const CPoint q = mid + Complex(t, 0.0) * u;
    const CPoint g = D.gauge_gradient(q);
    if (norm(g) == 0.0) continue;
    support.push_back(BoundaryPoint{q, normalized(g), 0.0});
  }
  for (const auto& s : support) lo = std::max(lo, detail::halfplane_lower(s.point, s.normal, x, y));
  return lo;
}

namespace detail {

/// Signed room left for the closed polydisk prod D(c_i, r_i) inside D; -inf
/// when containment cannot be decided in closed form.
inline double polydisk_slack(const ConvexDomain& D, const CPoint& c, const std::vector<double>& r,
                             std::size_t offset = 0) {
  auto hp = [&](Complex p, Complex n) { return halfplane_signed(c[offset], p, n) - r[offset]; };
  switch (D.kind()) {
    case DomainKind::Disk: {
      const auto* n = D.as<DiskNode>();
      return n->radius - std::abs(c[offset] - n->center) - r[offset];
    }
    case DomainKind::HalfPlane: {
      const auto* n = D.as<HalfPlaneNode>();
      return hp(n->point, n->normal);
    }
    case DomainKind::Sector: {
      const auto* n = D.as<SectorNode>();
      return std::min(hp(n->vertex, n->normal_alpha()), hp(n->vertex, n->normal_beta()));
    }
    case DomainKind::Ball: {
      const auto* n = D.as<BallNode>();
      double s = 0.0;
      for (std::size_t i = 0; i < D.dim(); ++i) {
        const double e = std::abs(c[offset + i] - n->center[i]) + r[offset + i];
        s += e * e;
      }
      return n->radius - std::sqrt(s);
    }
    case DomainKind::Polydisk: {
      const auto* n = D.as<PolydiskNode>();
      double s = kInf;
      for (std::size_t i = 0; i < D.dim(); ++i)
        s = std::min(s, n->radii[i] - std::abs(c[offset + i] - n->centers[i]) - r[offset + i]);
      return s;
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      return std::min(polydisk_slack(n->left, c, r, offset), polydisk_slack(n->right, c, r, offset + n->left.dim()));
    }
    case DomainKind::Intersection: {
      double s = kInf;
      for (const auto& m : D.as<IntersectionNode>()->members) s = std::min(s, polydisk_slack(m, c, r, offset));
      return s;
    }
    default:
      return -kInf;
  }
}

}  // namespace detail

/// Upper bound from inclusion of a polydisk P with x, y in P and P inside D:
/// K_D(x, y) <= K_P(x, y). Returns +inf when no such polydisk is found.
inline double inclusion_upper(const ConvexDomain& D, const CPoint& x, const CPoint& y) {
  if (x == y) return 0.0;
  const std::size_t d = D.dim();
  if (detail::polydisk_slack(D, CPoint(d), std::vector<double>(d, 0.0)) == -kInf) return kInf;
  const CPoint mid = 0.5 * (x + y);
  const double room = std::min(D.delta(x), D.delta(y)) / std::sqrt(double(d));

  // Disk i has center mid_i + s_i e^{i theta_i} and radius s_i + h_i, so
  // growing s_i with h_i fixed keeps the near side of the disk in place.
  auto disks = [&](const std::vector<double>& p, CPoint& c, std::vector<double>& r) {
    for (std::size_t i = 0; i < d; ++i) {
      const double sOff = std::exp(p[3 * i + 1]), h = std::exp(p[3 * i + 2]);
      c[i] = mid[i] + std::polar(sOff, p[3 * i]);
      r[i] = sOff + h;
    }
  };
  // Infeasible parameters score by violation so the simplex can walk back in.
  auto objective = [&](const std::vector<double>& p) {
    CPoint c(d);
    std::vector<double> r(d);
    disks(p, c, r);
    double slack = detail::polydisk_slack(D, c, r);
    if (!(slack > 0.0)) return 1e6 + (std::isfinite(slack) ? -slack : 1e6);
    double k = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const Complex a = (x[i] - c[i]) / r[i], b = (y[i] - c[i]) / r[i];
      if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0)) return 2e6 + std::max(std::abs(a), std::abs(b));
      k = std::max(k, disk_distance(a, b));
    }
    return k;
  };

  // Starting orientations: the inward normals of D and of its members.
  std::vector<CPoint> inward{-1.0 * D.nearest_boundary(mid).normal};
  if (const auto* n = D.as<IntersectionNode>())
    for (const auto& m : n->members) inward.push_back(-1.0 * m.nearest_boundary(mid).normal);
  std::vector<double> theta(d, 0.0), weight(d, 0.0);
  for (const auto& u : inward)
    for (std::size_t i = 0; i < d; ++i)
      if (std::abs(u[i]) > weight[i]) {
        weight[i] = std::abs(u[i]);
        theta[i] = std::arg(u[i]);
      }

  double best = kInf;
  for (const double grow : {0.5, 4.0}) {
    std::vector<double> p(3 * d), steps(3 * d);
    for (std::size_t i = 0; i < d; ++i) {
      const double half = 0.5 * std::abs(x[i] - y[i]);
      const double h = half + 0.5 * room;
      p[3 * i] = theta[i];
      p[3 * i + 1] = std::log(grow * h);
      p[3 * i + 2] = std::log(h);
      steps[3 * i] = 0.3;
      steps[3 * i + 1] = 1.0;
      steps[3 * i + 2] = 0.3;
    }
    double local = objective(p);
    if (local >= 1e6) continue;
    for (int round = 0; round < 8; ++round) {
      auto [q, v] = detail::minimize_simplex(p, steps, objective, 1500);
      const bool stalled = v >= local * (1.0 - 1e-9);
      if (v < local) {
        local = v;
        p = q;
      }
      if (stalled) break;
    }
    best = std::min(best, local);
  }
  return best < 1e6 ? best : kInf;
}

/// Upper bound from the complex line through x and y: exact when the slice is
/// a single catalog piece, otherwise the slice-metric length of the segment.
inline double slice_upper(const ConvexDomain& D, const CPoint& x, const CPoint& y, const MetricOptions& opt = {}) {
  if (x == y) return 0.0;
  const PlanarSlice S = D.slice(x, y - x);
  if (auto piece = S.exact_node()) return planar_distance(*piece, 0.0, 1.0);
  return curve_length(D, DiscretePath::straight(x, y, 2 + static_cast<std::size_t>(opt.movableNodes)), opt).hi;
}

inline DistanceInterval distance(const ConvexDomain& D, const CPoint& x, const CPoint& y, const MetricOptions& opt) {
  detail::require_metric_point(D, x, "distance");
  detail::require_metric_point(D, y, "distance");
  if (!D.c_proper()) throw Error("pseudo-distance-only", "domain is not C-proper: Kobayashi pseudo-distance only");
  if (x == y) return DistanceInterval::exact_value(0.0, Method::ExactChart);
  if (detail::lex_less(y, x)) return distance(D, y, x, opt);
  MethodSet tags;
  if (auto e = exact_distance(D, x, y, &tags)) return DistanceInterval::exact_value(*e, tags);

  if (const auto* n = D.as<ProductNode>()) {
    const std::size_t k = n->left.dim();
    const CPoint xl = x.head(k), yl = y.head(k), xr = x.tail(k), yr = y.tail(k);
    DistanceInterval l = xl == yl ? DistanceInterval{} : distance(n->left, xl, yl, opt);
    DistanceInterval r = xr == yr ? DistanceInterval{} : distance(n->right, xr, yr, opt);
    DistanceInterval out{std::max(l.lo, r.lo), std::max(l.hi, r.hi), l.methods | r.methods | Method::ProductMax, {}};
    out.warnings = l.warnings;
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    return out;
  }
  if (const auto* n = D.as<AffineImageNode>()) {
    DistanceInterval in = distance(n->inner, n->to_inner(x), n->to_inner(y), opt);
    in.methods |= Method::AffineInvariance;
    return in;
  }

  DistanceInterval out;
  out.lo = projection_lower(D, x, y, opt);
  out.methods |= Method::ProjectionLower;
  out.hi = slice_upper(D, x, y, opt);
  out.methods |= Method::SliceUpper;
  const double inc = inclusion_upper(D, x, y);
  if (inc < out.hi) {
    out.hi = inc;
    out.methods |= Method::InclusionUpper;
  }
  if (opt.optimizePath) {
    auto [path, len] = geodesic_approx(D, x, y, opt.movableNodes + 2, opt);
    if (len.hi < out.hi) {
      out.hi = len.hi;
      out.methods |= Method::PathOptimizer;
    }
  }
  if (out.lo > out.hi) {
    if (out.lo - out.hi > 1e-9 * (1.0 + out.hi)) out.warnings.push_back("bounds crossed beyond round-off");
    out.lo = out.hi;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact geodesics and midpoints

/// Constant-speed geodesic t in [0, 1] -> D with K(g(s), g(t)) = |t - s| length.
struct Geodesic {
  std::function<CPoint(double)> at;
  double length = 0.0;
  bool exact = false;
};

inline std::optional<Geodesic> exact_geodesic(const ConvexDomain& D, const CPoint& x, const CPoint& y) {
  detail::require_metric_point(D, x, "geodesic");
  detail::require_metric_point(D, y, "geodesic");
  auto len = exact_distance(D, x, y);
  if (!len) return std::nullopt;
  switch (D.kind()) {
    case DomainKind::Disk:
    case DomainKind::HalfPlane:
    case DomainKind::Sector: {
      const ConformalChart c = chart(D);
      const Complex a = c.forward(x[0]), b = c.forward(y[0]);
      const Complex z0 = x[0], z1 = y[0];
      return Geodesic{[c, a, b, z0, z1](double t) {
                        if (t <= 0.0) return CPoint{z0};
                        if (t >= 1.0) return CPoint{z1};
                        return CPoint{c.inverse(disk_geodesic(a, b, t))};
                      },
                      *len, true};
    }
    case DomainKind::Ball: {
      const BallNode n = *D.as<BallNode>();
      const double R = n.radius;
      const CPoint a = (1.0 / R) * (x - n.center);
      const CPoint u = detail::ball_involution(a, (1.0 / R) * (y - n.center));
      const double L = *len;
      const CPoint dir = norm(u) > 0.0 ? normalized(u) : u;
      return Geodesic{[n, a, dir, L, x, y](double t) {
                        if (t <= 0.0) return x;
                        if (t >= 1.0) return y;
                        const CPoint p = detail::ball_involution(a, Complex(std::tanh(t * L), 0.0) * dir);
                        return n.center + Complex(n.radius, 0.0) * p;
                      },
                      L, true};
    }
    case DomainKind::Polydisk: {
      const PolydiskNode n = *D.as<PolydiskNode>();
      return Geodesic{[n, x, y](double t) {
                        CPoint p = x;
                        for (std::size_t i = 0; i < x.dim(); ++i) {
                          const double r = n.radii[i];
                          const Complex c = n.centers[i];
                          p[i] = c + r * disk_geodesic((x[i] - c) / r, (y[i] - c) / r, t);
                        }
                        return p;
                      },
                      *len, true};
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      const std::size_t k = n->left.dim();
      auto l = exact_geodesic(n->left, x.head(k), y.head(k));
      auto r = exact_geodesic(n->right, x.tail(k), y.tail(k));
      if (!l || !r) return std::nullopt;
      return Geodesic{[l = *l, r = *r](double t) { return CPoint::join(l.at(t), r.at(t)); }, *len, true};
    }
    case DomainKind::AffineImage: {
      const auto* n = D.as<AffineImageNode>();
      auto g = exact_geodesic(n->inner, n->to_inner(x), n->to_inner(y));
      if (!g) return std::nullopt;
      const AffineImageNode node = *n;
      return Geodesic{[node, g = *g](double t) { return node.to_outer(g.at(t)); }, *len, true};
    }
    default:
      return std::nullopt;
  }
}

namespace detail {

/// Product-max canonical midpoint: a factor whose separation is at most half
/// the total stays at its left endpoint, the others take geodesic midpoints.
inline std::optional<CPoint> exact_midpoint(const ConvexDomain& D, const CPoint& x, const CPoint& y, double total) {
  if (const auto* n = D.as<ProductNode>()) {
    const std::size_t k = n->left.dim();
    auto l = exact_midpoint(n->left, x.head(k), y.head(k), total);
    auto r = exact_midpoint(n->right, x.tail(k), y.tail(k), total);
    if (!l || !r) return std::nullopt;
    return CPoint::join(*l, *r);
  }
  if (const auto* n = D.as<PolydiskNode>()) {
    CPoint m = x;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      const double r = n->radii[i];
      const Complex c = n->centers[i];
      const Complex a = (x[i] - c) / r, b = (y[i] - c) / r;
      if (disk_distance(a, b) > 0.5 * total) m[i] = c + r * disk_geodesic(a, b, 0.5);
    }
    return m;
  }
  auto d = exact_distance(D, x, y);
  if (!d) return std::nullopt;
  if (*d <= 0.5 * total) return x;
  auto g = exact_geodesic(D, x, y);
  if (!g) return std::nullopt;
  return g->at(0.5);
}

}  // namespace detail

/// Canonical exact midpoint for catalog compositions.
inline std::optional<CPoint> exact_midpoint_of(const ConvexDomain& D, const CPoint& x, const CPoint& y) {
  auto total = exact_distance(D, x, y);
  if (!total) return std::nullopt;
  return detail::exact_midpoint(D, x, y, *total);
}

struct MidpointResult {
  CPoint m;
  double residual = 0.0;
  bool exact = false;
};

/// |K(x,m) - K(m,y)| + |K(x,m) + K(m,y) - K(x,y)| on interval midpoints.
inline double midpoint_residual(const ConvexDomain& D, const CPoint& x, const CPoint& y, const CPoint& m,
                                double dxy, const MetricOptions& opt) {
  const double a = distance(D, x, m, opt).mid();
  const double b = distance(D, m, y, opt).mid();
  return std::abs(a - b) + std::abs(a + b - dxy);
}

namespace detail {

/// Nelder-Mead over R^{2d}, keeping vertices inside D.
template <class F>
CPoint nelder_mead(const ConvexDomain& D, const CPoint& start, double size, const F& f, int maxIter, double target,
                   double* best) {
  const std::size_t d = start.dim();
  auto unpack = [&](const std::vector<double>& v) {
    CPoint p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = Complex(v[2 * k], v[2 * k + 1]);
    return p;
  };
  std::vector<double> x0(2 * d);
  for (std::size_t k = 0; k < d; ++k) {
    x0[2 * k] = start[k].real();
    x0[2 * k + 1] = start[k].imag();
  }
  auto r = minimize_simplex(
      x0, std::vector<double>(2 * d, size),
      [&](const std::vector<double>& v) {
        const CPoint p = unpack(v);
        return D.contains(p) ? f(p) : kInf;
      },
      maxIter, target);
  *best = r.second;
  return unpack(r.first);
}

}  // namespace detail

/// Geodesic midpoint of x and y. Exact for catalog compositions; otherwise the
/// arclength midpoint of the optimized path, refined on the residual.
inline MidpointResult midpoint_search(const ConvexDomain& D, const CPoint& x, const CPoint& y, double tol,
                                      const MetricOptions& opt = {}) {
  detail::require_metric_point(D, x, "midpoint_search");
  detail::require_metric_point(D, y, "midpoint_search");
  if (x == y) return MidpointResult{x, 0.0, true};
  if (auto total = exact_distance(D, x, y)) {
    if (auto m = detail::exact_midpoint(D, x, y, *total)) {
      const double res = std::abs(*exact_distance(D, x, *m) - *exact_distance(D, *m, y)) +
                         std::abs(*exact_distance(D, x, *m) + *exact_distance(D, *m, y) - *total);
      if (res > tol) throw Error("midpoint-not-certified", "exact midpoint residual exceeds tolerance");
      return MidpointResult{*m, res, true};
    }
  }

  auto [path, len] = geodesic_approx(D, x, y, opt.movableNodes + 2, opt);
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    cum.push_back(cum.back() +
                  detail::upper_segment_cost(D, path.nodes[i], path.nodes[i + 1], opt.gaussPointsPerSegment));
  const double half = 0.5 * cum.back();
  std::size_t seg = 0;
  while (seg + 2 < cum.size() && cum[seg + 1] < half) ++seg;
  const CPoint a = path.nodes[seg], b = path.nodes[seg + 1];
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double t = 0.5 * (lo + hi);
    const double part = detail::upper_segment_cost(D, a, a + Complex(t, 0.0) * (b - a), opt.gaussPointsPerSegment);
    if (cum[seg] + part < half)
      lo = t;
    else
      hi = t;
  }
  CPoint m = a + Complex(0.5 * (lo + hi), 0.0) * (b - a);

  MetricOptions quick = opt;
  quick.optimizePath = false;
  const double dxy = distance(D, x, y, quick).mid();
  double res = midpoint_residual(D, x, y, m, dxy, quick);
  if (res > 0.1 * tol) {
    const double size = 1e-2 * std::min(D.delta(m), norm(y - x));
    double best = res;
    CPoint cand = detail::nelder_mead(
        D, m, size, [&](const CPoint& p) { return midpoint_residual(D, x, y, p, dxy, quick); }, 300, 0.1 * tol, &best);
    if (best < res) {
      m = cand;
      res = best;
    }
  }
  if (res > tol) throw Error("midpoint-not-certified", "midpoint residual " + std::to_string(res) + " exceeds tolerance");
  return MidpointResult{m, res, false};
}

/// Convenience: the geodesic as an arclength-parametrized discrete path when
/// no closed form exists.
inline Geodesic geodesic(const ConvexDomain& D, const CPoint& x, const CPoint& y, const MetricOptions& opt = {}) {
  if (auto g = exact_geodesic(D, x, y)) return *g;
  auto [path, len] = geodesic_approx(D, x, y, opt.movableNodes + 2, opt);
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i)
    cum.push_back(cum.back() +
                  detail::upper_segment_cost(D, path.nodes[i], path.nodes[i + 1], opt.gaussPointsPerSegment));
  const double L = cum.back();
  auto nodes = path.nodes;
  return Geodesic{[nodes, cum, L](double t) {
                    if (nodes.size() == 1 || L == 0.0) return nodes.front();
                    const double target = std::clamp(t, 0.0, 1.0) * L;
                    std::size_t i = 0;
                    while (i + 2 < cum.size() && cum[i + 1] < target) ++i;
                    const double span = cum[i + 1] - cum[i];
                    const double f = span > 0.0 ? (target - cum[i]) / span : 0.0;
                    return nodes[i] + Complex(f, 0.0) * (nodes[i + 1] - nodes[i]);
                  },
                  L, false};
}

}  // namespace kcat0
