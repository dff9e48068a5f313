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

// CAT(0) diagnostics: midpoint defect certificates, comparison triangles,
// the product certificate, and Gromov products.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kcat0/core.hpp"
#include "kcat0/domain.hpp"
#include "kcat0/metric.hpp"

namespace kcat0 {

enum class Verdict { ViolationCertified, NoViolationFound };

inline const char* verdict_name(Verdict v) {
  return v == Verdict::ViolationCertified ? "violation-certified" : "no-violation-found";
}

struct Cat0Certificate {
  CPoint x, y, z, m;
  double midpointResidual = 0.0;
  double tolerance = 0.0;
  DistanceInterval dxy, dzx, dzy, dzm;
  double defect = 0.0;
  Verdict verdict = Verdict::NoViolationFound;
  std::vector<std::string> diagnostics;
};

/// Tolerance on the midpoint residual: tight when the midpoint is exact.
inline double default_midpoint_tolerance(bool exact) { return exact ? 1e-9 : 1e-4; }

/// Worst-case midpoint defect
///   lo[d(z,m)]^2 - (1/2 (hi[d(z,x)]^2 + hi[d(z,y)]^2) - 1/4 lo[d(x,y)]^2).
/// Positive only if every admissible assignment of the intervals violates the
/// CAT(0) midpoint inequality.
inline double conservative_defect(const DistanceInterval& dxy, const DistanceInterval& dzx,
                                  const DistanceInterval& dzy, const DistanceInterval& dzm) {
  return dzm.lo * dzm.lo - (0.5 * (dzx.hi * dzx.hi + dzy.hi * dzy.hi) - 0.25 * dxy.lo * dxy.lo);
}

/// Midpoint certificate for the triple (x, y, z). A negative tol selects the
/// default for the midpoint type (exact or optimizer-based).
inline Cat0Certificate midpoint_defect(const ConvexDomain& D, const CPoint& x, const CPoint& y, const CPoint& z,
                                       double tol = -1.0, const MetricOptions& opt = {}) {
  for (const CPoint* p : {&x, &y, &z}) {
    require_dim(*p, D.dim(), "midpoint_defect");
    if (!D.contains(*p)) throw Error("outside-domain", "midpoint_defect: point is not inside the domain");
  }
  if (!D.c_proper()) throw Error("pseudo-distance-only", "domain is not C-proper: Kobayashi pseudo-distance only");
  const bool exactPair = exact_distance(D, x, y).has_value();
  const double useTol = tol >= 0.0 ? tol : default_midpoint_tolerance(exactPair);

  const MidpointResult mid = midpoint_search(D, x, y, useTol, opt);
  Cat0Certificate c;
  c.x = x;
  c.y = y;
  c.z = z;
  c.m = mid.m;
  c.midpointResidual = mid.residual;
  c.tolerance = useTol;
  c.dxy = distance(D, x, y, opt);
  c.dzx = distance(D, z, x, opt);
  c.dzy = distance(D, z, y, opt);
  c.dzm = distance(D, z, mid.m, opt);
  c.defect = conservative_defect(c.dxy, c.dzx, c.dzy, c.dzm);
  if (c.defect > 0.0 && mid.residual <= useTol) {
    c.verdict = Verdict::ViolationCertified;
  } else if (c.defect <= 0.0) {
    const double optimistic = c.dzm.hi * c.dzm.hi -
                              (0.5 * (c.dzx.lo * c.dzx.lo + c.dzy.lo * c.dzy.lo) - 0.25 * c.dxy.hi * c.dxy.hi);
    if (optimistic > 0.0) c.diagnostics.push_back("intervals too wide to decide");
  }
  return c;
}

struct ComparisonSample {
  double s = 0.0;
  double t = 0.0;
  double slack = 0.0;
};

struct ComparisonReport {
  CPoint a, b, c;
  double dab = 0.0, dac = 0.0, dbc = 0.0;
  std::vector<ComparisonSample> samples;
  double maxSlack = -kInf;
};

/// CAT(0) comparison along the geodesics [a, b] and [a, c]: slack is
/// K(p, q) - |p_bar - q_bar| for p = gamma_ab(s), q = gamma_ac(t).
inline ComparisonReport comparison_test(const ConvexDomain& D, const CPoint& a, const CPoint& b, const CPoint& c,
                                        int sampleCount, std::uint64_t seed, const MetricOptions& opt = {}) {
  if (a == b || a == c || b == c) throw Error("degenerate-triangle", "comparison_test needs pairwise distinct vertices");
  ComparisonReport r{a, b, c};
  auto dist = [&](const CPoint& p, const CPoint& q) { return distance(D, p, q, opt).mid(); };
  r.dab = dist(a, b);
  r.dac = dist(a, c);
  r.dbc = dist(b, c);
  if (r.dab <= 0.0 || r.dac <= 0.0 || r.dbc <= 0.0)
    throw Error("degenerate-triangle", "comparison triangle has a zero side");
  // a_bar = 0, b_bar = (dab, 0), c_bar from the law of cosines.
  const double cx = (r.dab * r.dab + r.dac * r.dac - r.dbc * r.dbc) / (2.0 * r.dab);
  const double cy = std::sqrt(std::max(0.0, r.dac * r.dac - cx * cx));
  const Geodesic gab = geodesic(D, a, b, opt);
  const Geodesic gac = geodesic(D, a, c, opt);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < sampleCount; ++i) {
    const double s = unif(rng), t = unif(rng);
    const CPoint p = gab.at(s), q = gac.at(t);
    const double px = s * r.dab, qx = t * cx, qy = t * cy;
    const double bar = std::hypot(px - qx, qy);
    const double slack = (p == q ? 0.0 : dist(p, q)) - bar;
    r.samples.push_back({s, t, slack});
    r.maxSlack = std::max(r.maxSlack, slack);
  }
  return r;
}

/// Builds the product certificate in D1 x D2: the midpoint m of x, y in D1,
/// a base point w of D2, and z on the D2-geodesic from w along `direction`
/// with K_{D2}(w, z) = K_{D1}(x, y) / 2. The certificate is for the points
/// (x, w), (y, w) and (m, z).
inline Cat0Certificate product_certificate(const ConvexDomain& D1, const ConvexDomain& D2, const CPoint& x,
                                           const CPoint& y, std::optional<CPoint> w = std::nullopt,
                                           std::optional<CPoint> direction = std::nullopt) {
  if (x == y) throw Error("degenerate-pair", "product_certificate needs x != y");
  auto dxy = exact_distance(D1, x, y);
  if (!dxy) throw Error("not-catalog", "product_certificate needs exact distances on the first factor");
  const CPoint base = w ? *w : D2.anchor().value_or(CPoint(D2.dim()));
  if (!D2.contains(base)) throw Error("outside-domain", "product_certificate: base point is not inside D2");
  CPoint u(D2.dim());
  if (direction) {
    u = normalized(*direction);
  } else {
    u[0] = 1.0;
  }
  const double target = 0.5 * *dxy;
  auto along = [&](double t) { return base + Complex(t, 0.0) * u; };
  auto kw = [&](double t) {
    auto d = exact_distance(D2, base, along(t));
    if (!d) throw Error("not-catalog", "product_certificate needs exact distances on the second factor");
    return *d;
  };
  // Bracket the root of K(w, w + t u) = target along the ray.
  const double exitT = D2.ray_exit(base, u);
  double lo = 0.0, hi;
  if (std::isfinite(exitT)) {
    hi = exitT;
    double probe = exitT * (1.0 - 1e-15);
    if (kw(probe) < target) throw Error("choose-closer-points", "D2 is too small along this ray: choose closer x, y");
    hi = probe;
  } else {
    hi = 1.0;
    while (kw(hi) < target) {
      hi *= 2.0;
      if (hi > 1e12) throw Error("choose-closer-points", "target distance not reached along the ray");
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kw(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const CPoint zp = along(0.5 * (lo + hi));

  const ConvexDomain P = ConvexDomain::product(D1, D2);
  const CPoint X = CPoint::join(x, base), Y = CPoint::join(y, base);
  Cat0Certificate c = midpoint_defect(P, X, Y, CPoint::join(*exact_midpoint_of(D1, x, y), zp));
  return c;
}

/// Gromov product (x|y)_o from interval midpoints.
inline double gromov_product(const ConvexDomain& D, const CPoint& o, const CPoint& x, const CPoint& y,
                             const MetricOptions& opt = {}) {
  auto d = [&](const CPoint& p, const CPoint& q) { return p == q ? 0.0 : distance(D, p, q, opt).mid(); };
  return 0.5 * (d(x, o) + d(o, y) - d(x, y));
}

/// Max over all quadruples (o, x, y, z) of min{(x|z)_o, (z|y)_o} - (x|y)_o.
inline double four_point_delta(const ConvexDomain& D, const std::vector<CPoint>& pts, const MetricOptions& opt = {}) {
  const std::size_t n = pts.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = pts[i] == pts[j] ? 0.0 : distance(D, pts[i], pts[j], opt).mid();
  auto gp = [&](std::size_t o, std::size_t a, std::size_t b) { return 0.5 * (d[a][o] + d[o][b] - d[a][b]); };
  double best = n == 0 ? 0.0 : -kInf;
  for (std::size_t o = 0; o < n; ++o)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) best = std::max(best, std::min(gp(o, a, c), gp(o, c, b)) - gp(o, a, b));
  return best;
}

}  // namespace kcat0
