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

// Local Hausdorff distances, affine rescaling sequences and convergence
// experiments for Kobayashi distances.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kcat0/cat0.hpp"
#include "kcat0/convexity.hpp"
#include "kcat0/core.hpp"
#include "kcat0/defining_function.hpp"
#include "kcat0/detail/convex_numerics.hpp"
#include "kcat0/domain.hpp"
#include "kcat0/metric.hpp"

namespace kcat0 {

struct HausdorffReading {
  double R = 0.0;
  double value = 0.0;
  double mesh = 0.0;
  std::size_t directions = 0;
};

namespace detail {

/// Closed window A ∩ B(0, R) seen through an interior anchor.
struct Window {
  const ConvexDomain* D;
  double R;
  CPoint anchor;

  double exit(const CPoint& u) const {
    const double tD = D->ray_exit(anchor, u);
    const double tB = ball_exit(anchor, u, R);
    return std::min(tD, tB);
  }
  /// Nearest point of the closed window, by Dykstra over the domain and the
  /// ball; nullopt when the domain has no projection.
  std::optional<CPoint> project(const CPoint& z) const {
    auto ball = [&](const CPoint& p) {
      const double r = norm(p);
      return r <= R ? p : Complex(R / r, 0.0) * p;
    };
    CPoint x = z, pInc(z.dim()), qInc(z.dim());
    for (int it = 0; it < 5000; ++it) {
      const CPoint y0 = x + pInc;
      auto y = D->project(y0);
      if (!y) return std::nullopt;
      pInc = y0 - *y;
      const CPoint w0 = *y + qInc;
      const CPoint w = ball(w0);
      qInc = w0 - w;
      const double change = norm(w - x);
      x = w;
      if (change < 1e-13 * (1.0 + R)) break;
    }
    return x;
  }
};

inline CPoint window_anchor(const ConvexDomain& D, double R) {
  const std::size_t d = D.dim();
  const CPoint zero(d);
  if (D.contains(zero)) return zero;
  auto a = D.anchor();
  if (!a) throw Error("no-anchor", "hausdorff needs an interior anchor");
  std::optional<CPoint> base = D.project(zero);
  if (!base) {
    // Walk from the anchor toward the origin until the boundary.
    const CPoint u = zero - *a;
    const double t = D.ray_exit(*a, u);
    base = *a + Complex(std::min(t, 1.0), 0.0) * u;
  }
  if (norm(*base) >= R) throw Error("empty-window", "domain does not meet the window ball");
  // Point between the nearest point to 0 and the anchor, well inside both.
  const double room = R - norm(*base);
  const CPoint dir = *a - *base;
  const double len = norm(dir);
  for (double frac : {0.5, 0.25, 0.1, 0.01, 1e-3, 1e-4}) {
    const double step = std::min(frac * room, 0.5 * len);
    const CPoint c = *base + Complex(step / len, 0.0) * dir;
    if (D.contains(c) && norm(c) < R) return c;
  }
  throw Error("empty-window", "could not find an interior point of the window");
}

inline std::vector<CPoint> window_boundary(const Window& W, const std::vector<CPoint>& dirs) {
  std::vector<CPoint> pts;
  pts.reserve(dirs.size());
  for (const auto& u : dirs) {
    const double t = W.exit(u);
    if (std::isfinite(t)) pts.push_back(W.anchor + Complex(t, 0.0) * u);
  }
  return pts;
}

inline double sample_mesh(const std::vector<CPoint>& pts) {
  double mesh = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = kInf;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) best = std::min(best, norm(pts[i] - pts[j]));
    if (std::isfinite(best)) mesh = std::max(mesh, best);
  }
  return mesh;
}

/// sup over sampled boundary points a of A^(R) of dist(a, B^(R)).
inline double one_sided_excess(const std::vector<CPoint>& aPts, const Window& B, const std::vector<CPoint>& bPts) {
  double worst = 0.0;
  for (const auto& a : aPts) {
    double dist;
    if (auto p = B.project(a)) {
      dist = norm(a - *p);
    } else if (B.D->closure_contains(a, 1e-12) && norm(a) <= B.R) {
      dist = 0.0;
    } else {
      dist = kInf;
      for (const auto& b : bPts) dist = std::min(dist, norm(a - b));
    }
    worst = std::max(worst, dist);
  }
  return worst;
}

}  // namespace detail

/// Windowed Hausdorff distance d_H(A ∩ B(0,R), B ∩ B(0,R)) from boundary
/// samples on a direction grid around interior anchors.
inline HausdorffReading hausdorff(const ConvexDomain& A, const ConvexDomain& B, double R,
                                  std::size_t directions = 4096) {
  if (A.dim() != B.dim()) throw Error("dimension-mismatch", "hausdorff needs domains of equal dimension");
  if (!(R > 0.0)) throw Error("bad-window", "window radius must be positive");
  const detail::Window WA{&A, R, detail::window_anchor(A, R)};
  const detail::Window WB{&B, R, detail::window_anchor(B, R)};
  const auto dirs = detail::sphere_directions(A.dim(), directions);
  const auto pa = detail::window_boundary(WA, dirs);
  const auto pb = detail::window_boundary(WB, dirs);
  HausdorffReading h;
  h.R = R;
  h.directions = dirs.size();
  h.mesh = std::max(detail::sample_mesh(pa), detail::sample_mesh(pb));
  h.value = std::max(detail::one_sided_excess(pa, WB, pb), detail::one_sided_excess(pb, WA, pa));
  return h;
}

/// Same reading, one-sided: sup over A^(R) of the distance to B^(R).
inline double hausdorff_excess(const ConvexDomain& A, const ConvexDomain& B, double R, std::size_t directions = 4096) {
  const detail::Window WA{&A, R, detail::window_anchor(A, R)};
  const detail::Window WB{&B, R, detail::window_anchor(B, R)};
  const auto dirs = detail::sphere_directions(A.dim(), directions);
  return detail::one_sided_excess(detail::window_boundary(WA, dirs), WB, detail::window_boundary(WB, dirs));
}

enum class ScalingKind { Lemma32, Frankel2b, Dilation };

inline const char* scaling_kind_name(ScalingKind k) {
  switch (k) {
    case ScalingKind::Lemma32:
      return "lemma32";
    case ScalingKind::Frankel2b:
      return "frankel2b";
    default:
      return "dilation";
  }
}

struct AffineStep {
  double n = 0.0;
  CMatrix A;
  CPoint b;
};

struct ScalingSequence {
  ScalingKind kind = ScalingKind::Dilation;
  ConvexDomain source;
  std::optional<ConvexDomain> claimedLimit;
  std::function<AffineStep(double)> map;
  std::vector<std::string> notes;

  /// A_n(source) + b_n, kept structural where possible.
  ConvexDomain domain_at(double n) const {
    const AffineStep s = map(n);
    if (kind == ScalingKind::Dilation) return dilate(source, n);
    if (kind == ScalingKind::Lemma32)
      if (const auto* p = source.as<ProductNode>(); p && p->left.dim() == 1)
        return ConvexDomain::product(dilate(p->left, n), p->right);
    return ConvexDomain::affine_image(s.A, s.b, source);
  }
};

inline ScalingSequence dilation_sequence(const ConvexDomain& D, std::optional<ConvexDomain> limit = std::nullopt) {
  ScalingSequence s;
  s.kind = ScalingKind::Dilation;
  s.source = D;
  s.claimedLimit = std::move(limit);
  const std::size_t d = D.dim();
  s.map = [d](double n) {
    CMatrix A = CMatrix::identity(d);
    for (std::size_t i = 0; i < d; ++i) A(i, i) = n;
    return AffineStep{n, A, CPoint(d)};
  };
  return s;
}

/// Scaling z_1 -> n z_1 toward the tangent cone of the first-coordinate slice
/// at a boundary point 0.
inline ScalingSequence scaling_lemma32(const ConvexDomain& D) {
  const std::size_t d = D.dim();
  CPoint zero(d);
  if (D.contains(zero) || !D.closure_contains(zero, 1e-9))
    throw Error("not-on-boundary", "0 must lie on the boundary of the first-coordinate slice");
  auto inSlice = [&](double theta, double t) {
    CPoint z(d);
    z[0] = std::polar(t, theta);
    return D.contains(z);
  };
  const double t = 1e-8;
  const int grid = 4096;
  std::vector<bool> in(grid);
  int outsideAt = -1;
  for (int k = 0; k < grid; ++k) {
    in[k] = inSlice(2.0 * kPi * k / grid, t);
    if (!in[k] && outsideAt < 0) outsideAt = k;
  }
  if (outsideAt < 0) throw Error("not-on-boundary", "slice surrounds 0: 0 is not a boundary point");
  // Longest run of inside angles, scanning from an outside angle.
  int bestStart = -1, bestLen = 0;
  for (int j = 0, run = 0, start = 0; j <= grid; ++j) {
    const int k = (outsideAt + j) % grid;
    if (j < grid && in[k]) {
      if (run == 0) start = outsideAt + j;
      ++run;
    } else {
      if (run > bestLen) {
        bestLen = run;
        bestStart = start;
      }
      run = 0;
    }
  }
  if (bestLen == 0) throw Error("empty-cone", "slice has no interior directions at 0");
  const double step = 2.0 * kPi / grid;
  auto refine = [&](double insideAng, double outsideAng) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (insideAng + outsideAng);
      if (inSlice(mid, t))
        insideAng = mid;
      else
        outsideAng = mid;
    }
    return 0.5 * (insideAng + outsideAng);
  };
  double alpha = refine(bestStart * step, (bestStart - 1) * step);
  double beta = refine((bestStart + bestLen - 1) * step, (bestStart + bestLen) * step);
  ScalingSequence s;
  s.kind = ScalingKind::Lemma32;
  s.source = D;
  // Openings within the probe resolution of pi are half-planes.
  if (std::abs((beta - alpha) - kPi) < 1e-6) beta = alpha + kPi;
  const ConvexDomain cone = ConvexDomain::sector(0.0, alpha, std::min(beta, alpha + kPi));
  if (const auto* p = D.as<ProductNode>(); p && p->left.dim() == 1) {
    s.claimedLimit = ConvexDomain::product(cone, p->right);
  } else if (d == 1) {
    s.claimedLimit = cone;
  } else {
    s.notes.push_back("limit contains the cone times the remaining slice; only the inclusion is certified");
  }
  s.notes.push_back("first-factor cone: sector(" + std::to_string(alpha) + ", " + std::to_string(beta) + ")");
  s.map = [d](double n) {
    CMatrix A = CMatrix::identity(d);
    A(0, 0) = n;
    return AffineStep{n, A, CPoint(d)};
  };
  return s;
}

struct FrankelStep {
  double n = 0.0;
  Complex zn;
  double an = 0.0;
  double fzn = 0.0;
  double maxRatio = 0.0;  // max over samples of f_n(0, w) / |w|^n
  bool inequalityHolds = false;
  std::optional<HausdorffReading> hausdorff;
};

struct FrankelOptions {
  double r0 = 0.9;
  int radial = 512;
  int angular = 256;
  int verifySamples = 100;
  std::uint64_t seed = 1;
  /// Window radius for the Hausdorff report (0 disables it).
  double hausdorffR = 0.0;
  std::size_t hausdorffDirections = 1024;
};

struct FrankelResult {
  ScalingSequence sequence;
  std::vector<FrankelStep> steps;
};

/// Anchors z_n at the maximizer of f(0, w) / |w|^n on |w| <= r0 and returns
/// A_n = diag(1 / f(0, z_n), 1 / z_n). The slice function f0(w) = f(0, w).
/// When fFull (the graph function f(x, z) of the boundary) is given, the
/// domain {Im z_1 > f(Re z_1, z_2)} ∩ B(0, 1) is rescaled and compared to
/// H x Δ on a window.
inline FrankelResult frankel_2b(const std::function<double(Complex)>& f0, const std::vector<double>& nGrid,
                                const FrankelOptions& opt = {},
                                const std::function<double(double, Complex)>& fFull = nullptr) {
  FrankelResult out;
  auto shared = std::make_shared<std::vector<FrankelStep>>();
  std::optional<ConvexDomain> omegaV;
  if (fFull) {
    DefiningFunction r;
    r.dim = 2;
    r.value = [fFull](const CPoint& z) { return fFull(z[0].real(), z[1]) - z[0].imag(); };
    omegaV = ConvexDomain::intersection(
        {ConvexDomain::graph(r, true, CPoint{Complex(0.0, 0.5), 0.0}), ConvexDomain::ball(CPoint(2), 1.0)});
  }
  const ConvexDomain limit = ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk());

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double n : nGrid) {
    auto ratio = [&](Complex w) { return f0(w) / std::pow(std::abs(w), n); };
    double best = -kInf;
    int bj = 0;
    Complex bw;
    for (int j = 1; j <= opt.radial; ++j) {
      const double rho = opt.r0 * j / opt.radial;
      for (int k = 0; k < opt.angular; ++k) {
        const Complex w = std::polar(rho, 2.0 * kPi * k / opt.angular);
        const double g = ratio(w);
        if (g > best) {
          best = g;
          bj = j;
          bw = w;
        }
      }
    }
    if (bj == opt.radial)
      throw Error("enlarge-search-radius", "max of f(0,w)/|w|^n attained at the outer grid radius (n = " +
                                               std::to_string(n) + ")");
    if (bj == 1)
      throw Error("grid-boundary", "max of f(0,w)/|w|^n attained at the innermost grid radius (n = " +
                                       std::to_string(n) + "): finite type along this slice");
    // One refinement round on a finer local grid.
    {
      const double dr = opt.r0 / opt.radial, da = 2.0 * kPi / opt.angular;
      const Complex center = bw;
      for (int a = -16; a <= 16; ++a)
        for (int b = -16; b <= 16; ++b) {
          const double rho = std::abs(center) + dr * a / 16.0;
          const double ang = std::arg(center) + da * b / 16.0;
          if (!(rho > 0.0) || rho > opt.r0) continue;
          const Complex w = std::polar(rho, ang);
          const double g = ratio(w);
          if (g > best) {
            best = g;
            bw = w;
          }
        }
    }
    FrankelStep st;
    st.n = n;
    st.zn = bw;
    st.an = best;
    st.fzn = f0(bw);
    if (!(st.fzn > 0.0))
      throw Error("affine-disk", "f(0, z_n) = 0: the boundary contains an affine disk, use the lemma32 scaling");
    // f_n(0, w) = f(0, z_n w) / f(0, z_n) <= |w|^n for |w| < 1.
    st.maxRatio = 0.0;
    st.inequalityHolds = true;
    for (int i = 0; i < opt.verifySamples; ++i) {
      const Complex w = std::polar(std::sqrt(unif(rng)), 2.0 * kPi * unif(rng));
      if (std::abs(w) == 0.0) continue;
      const double fn = f0(st.zn * w) / st.fzn;
      const double bound = std::pow(std::abs(w), n);
      if (bound > 0.0) st.maxRatio = std::max(st.maxRatio, fn / bound);
      if (fn > bound * (1.0 + 1e-9) + 1e-300) st.inequalityHolds = false;
    }
    if (omegaV && opt.hausdorffR > 0.0) {
      CMatrix A = CMatrix::diagonal({1.0 / st.fzn, 1.0 / st.zn});
      const ConvexDomain scaled = ConvexDomain::affine_image(A, CPoint(2), *omegaV);
      st.hausdorff = hausdorff(scaled, limit, opt.hausdorffR, opt.hausdorffDirections);
    }
    shared->push_back(st);
    out.steps.push_back(st);
  }
  out.sequence.kind = ScalingKind::Frankel2b;
  if (omegaV) out.sequence.source = *omegaV;
  out.sequence.claimedLimit = limit;
  out.sequence.map = [shared](double n) {
    for (const auto& st : *shared)
      if (st.n == n) return AffineStep{n, CMatrix::diagonal({1.0 / st.fzn, 1.0 / st.zn}), CPoint(2)};
    throw Error("unknown-step", "frankel sequence was not computed at this n");
  };
  return out;
}

struct ConvergenceRow {
  double n = 0.0;
  std::size_t pairIndex = 0;
  double gap = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<double, double>> maxGap;  // (n, max over pairs)
  bool monotone = false;

  std::string csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "n,pairIndex,gap\n";
    for (const auto& r : rows) os << r.n << ',' << r.pairIndex << ',' << r.gap << '\n';
    return os.str();
  }
};

/// |K_{Ω_n}(x, y) - K_target(x, y)| per pair and n, from interval midpoints.
inline ConvergenceTable convergence_check(const std::vector<std::pair<double, ConvexDomain>>& sequence,
                                          const ConvexDomain& target,
                                          const std::vector<std::pair<CPoint, CPoint>>& pairs,
                                          const MetricOptions& opt = {}) {
  std::vector<double> bad;
  for (const auto& [n, Dn] : sequence)
    for (const auto& [x, y] : pairs)
      if (!Dn.contains(x) || !Dn.contains(y)) {
        bad.push_back(n);
        break;
      }
  if (!bad.empty()) {
    std::string msg = "test pair leaves the domain at n =";
    for (double n : bad) msg += " " + std::to_string(n);
    throw Error("pair-outside", msg);
  }
  ConvergenceTable t;
  std::vector<double> ref;
  for (const auto& [x, y] : pairs) ref.push_back(distance(target, x, y, opt).mid());
  for (const auto& [n, Dn] : sequence) {
    double mx = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double gap = std::abs(distance(Dn, pairs[i].first, pairs[i].second, opt).mid() - ref[i]);
      t.rows.push_back({n, i, gap});
      mx = std::max(mx, gap);
    }
    t.maxGap.push_back({n, mx});
  }
  t.monotone = true;
  for (std::size_t i = 1; i < t.maxGap.size(); ++i)
    if (!(t.maxGap[i].second < t.maxGap[i - 1].second)) t.monotone = false;
  return t;
}

/// The intersection of the unit balls centered at (1, 0) and (0, 1).
inline ConvexDomain example36_domain() {
  return ConvexDomain::intersection(
      {ConvexDomain::ball(CPoint{1.0, 0.0}, 1.0), ConvexDomain::ball(CPoint{0.0, 1.0}, 1.0)});
}

/// Its blow-up limit at 0: the product of two right half-planes.
inline ConvexDomain example36_limit() {
  return ConvexDomain::product(ConvexDomain::right_half_plane(), ConvexDomain::right_half_plane());
}

struct Example36Options {
  double R = 2.0;
  int mconvexSamples = 400;
  std::uint64_t seed = 42;
  std::vector<double> dilations{1.0, 10.0, 100.0};
  double hausdorffR = 1.0;
  std::size_t hausdorffDirections = 4096;
  double largeN = 1e6;
};

struct Example36Report {
  MConvexityReport mconvex;
  std::vector<std::pair<double, HausdorffReading>> hausdorffReadings;
  bool hausdorffDecreasing = false;
  Cat0Certificate limitCertificate;
  double largeN = 0.0;
  Cat0Certificate largeNCertificate;
  double target = 0.0;
};

inline Example36Report example36(const Example36Options& opt = {}) {
  Example36Report rep;
  const ConvexDomain omega = example36_domain();
  const ConvexDomain limit = example36_limit();
  rep.target = std::pow(0.5 * std::log(2.0), 2);

  rep.mconvex = local_m_convex_check(omega, opt.R, 2, opt.mconvexSamples, opt.seed);

  for (double n : opt.dilations)
    rep.hausdorffReadings.push_back({n, hausdorff(dilate(omega, n), limit, opt.hausdorffR, opt.hausdorffDirections)});
  rep.hausdorffDecreasing = true;
  for (std::size_t i = 1; i < rep.hausdorffReadings.size(); ++i)
    if (!(rep.hausdorffReadings[i].second.value < rep.hausdorffReadings[i - 1].second.value))
      rep.hausdorffDecreasing = false;

  const ConvexDomain H = ConvexDomain::right_half_plane();
  rep.limitCertificate = product_certificate(H, H, CPoint{1.0}, CPoint{4.0}, CPoint{1.0});

  rep.largeN = opt.largeN;
  const Cat0Certificate& lc = rep.limitCertificate;
  rep.largeNCertificate = midpoint_defect(dilate(omega, opt.largeN), lc.x, lc.y, lc.z);
  return rep;
}

}  // namespace kcat0
