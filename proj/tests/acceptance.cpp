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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kcat0/kcat0.hpp"

using namespace kcat0;

namespace {

const Complex I(0.0, 1.0);
const double kTarget = std::pow(0.5 * std::log(2.0), 2);

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Complex random_in_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), 2 * kPi * u(rng));
}

Complex random_in_halfplane(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-3.0, 3.0), lim(-3.0, 1.5);
  return Complex(re(rng), std::exp(lim(rng)));
}

Complex random_in_quarter(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.02, kPi / 2 - 0.02), r(0.05, 3.0);
  return std::polar(r(rng), a(rng));
}

CPoint random_in_ball(std::mt19937_64& rng, double r) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CPoint p{Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
  return (r * std::pow(u(rng), 0.25) / norm(p)) * p;
}

// Closed forms, normalized by k(0; v) = |v| on the disk.
double disk_closed(Complex z, Complex w) { return std::atanh(std::abs((z - w) / (1.0 - std::conj(w) * z))); }
double halfplane_closed(Complex z, Complex w) {
  return 0.5 * std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

// Criterion 1: exact product certificate and path-optimizer agreement.
void criterion1(Outcome& o) {
  const auto H = ConvexDomain::upper_half_plane(), Dk = ConvexDomain::unit_disk();
  const auto c = product_certificate(H, Dk, CPoint{I}, CPoint{4.0 * I}, CPoint{0.0});
  o.detail << "defect=" << c.defect;
  o.require(std::abs(c.defect - kTarget) <= 1e-9, "defect within 1e-9 of (ln2/2)^2");
  o.require(c.verdict == Verdict::ViolationCertified, "verdict violation-certified");

  const auto D = ConvexDomain::product(H, Dk);
  double worst = 0.0;
  const std::vector<std::pair<CPoint, CPoint>> pairs = {{c.x, c.y}, {c.z, c.x}, {c.z, c.y}, {c.z, c.m}};
  for (const auto& [a, b] : pairs) {
    const double closed = std::max(halfplane_closed(a[0], b[0]), disk_closed(a[1], b[1]));
    const auto [path, len] = geodesic_approx(D, a, b, 35);
    worst = std::max(worst, std::abs(len.hi - closed));
  }
  o.detail << " path-vs-closed=" << worst;
  o.require(worst <= 1e-3, "path optimizer within 1e-3 of closed forms");
}

// Criterion 2: Sector x Disk restricted to z2 = 0 is the sector, isometrically.
void criterion2(Outcome& o) {
  const auto S = ConvexDomain::sector(0.0, 0.0, kPi / 2);
  const auto D = ConvexDomain::product(S, ConvexDomain::unit_disk());
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Complex z1 = random_in_quarter(rng), z2 = random_in_quarter(rng);
    const CPoint x{z1, 0.0}, y{z2, 0.0};
    const double ks = planar_distance(S, z1, z2);
    // Lower: projection onto the first factor. Upper: the complex line through x and y.
    const double lo = planar_distance(S, x[0], y[0]);
    const double hi = slice_upper(D, x, y);
    const auto d = distance(D, x, y);
    worst = std::max({worst, std::abs(hi - lo), std::abs(d.lo - ks), std::abs(d.hi - ks), std::abs(hi - ks)});
  }
  o.detail << "max|K_D-K_sector|=" << worst;
  o.require(worst <= 1e-9, "sandwich closes within 1e-9 on 50 pairs");
}

// Criterion 3: metric axioms on five domains.
void criterion3(Outcome& o) {
  struct Case {
    const char* name;
    ConvexDomain D;
    std::function<CPoint(std::mt19937_64&)> sample;
  };
  const std::vector<Case> cases = {
      {"disk", ConvexDomain::unit_disk(), [](auto& r) { return CPoint{random_in_disk(r, 0.99)}; }},
      {"halfplane", ConvexDomain::upper_half_plane(), [](auto& r) { return CPoint{random_in_halfplane(r)}; }},
      {"sector", ConvexDomain::sector(0.0, 0.0, kPi / 2), [](auto& r) { return CPoint{random_in_quarter(r)}; }},
      {"halfplane-x-disk", ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk()),
       [](auto& r) { return CPoint{random_in_halfplane(r), random_in_disk(r, 0.99)}; }},
      {"ball", ConvexDomain::ball(CPoint{0.0, 0.0}, 1.0), [](auto& r) { return random_in_ball(r, 0.99); }},
  };
  for (const auto& c : cases) {
    std::mt19937_64 rng(3);
    double minSlack = kInf;
    bool symmetric = true, zero = true;
    for (int k = 0; k < 1000; ++k) {
      const CPoint x = c.sample(rng), y = c.sample(rng), z = c.sample(rng);
      const auto dxy = distance(c.D, x, y), dyx = distance(c.D, y, x);
      const auto dyz = distance(c.D, y, z), dxz = distance(c.D, x, z);
      symmetric = symmetric && dxy.lo == dyx.lo && dxy.hi == dyx.hi;
      zero = zero && distance(c.D, x, x).hi == 0.0;
      minSlack = std::min(minSlack, dxy.hi + dyz.hi - dxz.lo);
    }
    o.detail << c.name << ":slack>=" << minSlack << " ";
    o.require(symmetric, std::string(c.name) + " symmetry exact");
    o.require(zero, std::string(c.name) + " d(x,x)=0");
    o.require(minSlack >= -1e-9, std::string(c.name) + " triangle slack >= -1e-9");
  }
}

// Criterion 4: no false CAT(0) violations on the disk.
void criterion4(Outcome& o) {
  const auto D = ConvexDomain::unit_disk();
  std::mt19937_64 rng(4);
  double maxDefect = -kInf, maxSlack = -kInf;
  for (int k = 0; k < 200; ++k) {
    const CPoint x{random_in_disk(rng, 0.95)}, y{random_in_disk(rng, 0.95)}, z{random_in_disk(rng, 0.95)};
    const auto c = midpoint_defect(D, x, y, z);
    maxDefect = std::max(maxDefect, c.defect);
    o.require(c.verdict == Verdict::NoViolationFound, "midpoint verdict on triangle " + std::to_string(k));
    maxSlack = std::max(maxSlack, comparison_test(D, x, y, z, 50, 1000 + k).maxSlack);
  }
  o.detail << "max defect=" << maxDefect << " max slack=" << maxSlack;
  o.require(maxDefect <= 1e-9, "midpoint defect <= 1e-9");
  o.require(maxSlack <= 1e-9, "comparison slack <= 1e-9");
}

// Criterion 5: m-convexity.
void criterion5(Outcome& o) {
  const auto B = ConvexDomain::ball(CPoint{0.0, 0.0}, 1.0);
  const auto fit = exponent_fit(B, CPoint{1.0, 0.0}, CPoint{-1.0, 0.0}, CPoint{0.0, 1.0}, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  o.detail << "ball slope=" << fit.fittedExponent;
  o.require(fit.fittedExponent >= 0.48 && fit.fittedExponent <= 0.52, "ball slope in [0.48, 0.52]");

  const auto ex = local_m_convex_check(example36_domain(), 2.0, 2, 400, 42);
  o.detail << " example C=" << ex.fittedConstant;
  o.require(ex.pass && std::isfinite(ex.fittedConstant), "intersection of balls is 2-convex with finite C");

  const auto pd = local_m_convex_check(ConvexDomain::polydisk(CPoint{0.0, 0.0}, {1.0, 1.0}), 2.0, 2, 400, 42);
  bool unbounded = false;
  for (const auto& d : pd.diagnostics) unbounded = unbounded || d.find("unbounded-C") != std::string::npos;
  o.require(!pd.pass && unbounded, "polydisk reports unbounded-C");
}

// Criterion 6: line type.
void criterion6(Outcome& o) {
  RealPolynomial sphere(2);
  for (int k = 0; k < 4; ++k) {
    std::vector<int> e(4, 0);
    e[k] = 2;
    sphere.add(e, 1);
  }
  sphere.add({0, 0, 0, 0}, -1);
  const auto ball = line_type(DefiningFunction::from_polynomial(sphere), CPoint{1.0, 0.0});
  // -Im z1 + |z2|^4 in real coordinates.
  RealPolynomial q(2);
  q.add({0, 1, 0, 0}, -1).add({0, 0, 4, 0}, 1).add({0, 0, 2, 2}, 2).add({0, 0, 0, 4}, 1);
  const auto r = DefiningFunction::from_polynomial(q);
  const auto sym = line_type(r, CPoint{0.0, 0.0}, 256, OrderMethod::Symbolic);
  const auto num = line_type(r, CPoint{0.0, 0.0}, 256, OrderMethod::Numeric);
  o.detail << "ball L=" << ball.L << " quartic L=" << sym.L << " (numeric " << num.L << ")";
  o.require(ball.L == 2, "ball L = 2");
  o.require(sym.L == 4, "quartic symbolic L = 4");
  o.require(num.L == sym.L, "numeric path agrees");
}

// Criterion 7: (1 + 1/n) disks converge to the disk.
void criterion7(Outcome& o) {
  const auto D = ConvexDomain::unit_disk();
  std::vector<std::pair<double, ConvexDomain>> seq;
  for (double n : {10.0, 100.0, 1000.0}) seq.push_back({n, dilate(D, 1.0 + 1.0 / n)});
  const auto t = convergence_check(seq, D, {{CPoint{0.0}, CPoint{0.5}}});
  const double gap100 = t.maxGap[1].second;
  const double stated = std::abs(std::atanh(0.49505) - std::atanh(0.5));
  o.detail << "gaps=" << t.maxGap[0].second << "," << gap100 << "," << t.maxGap[2].second;
  o.require(std::abs(gap100 - stated) <= 1e-6, "gap at n=100 within 1e-6 of |artanh(0.49505) - artanh(0.5)|");
  o.require(t.monotone, "gaps strictly decreasing");
}

// Criterion 8: intersection-of-balls pipeline.
void criterion8(Outcome& o) {
  const auto r = example36();
  o.detail << "mconvex pass=" << r.mconvex.pass << " hausdorff=";
  for (const auto& [n, h] : r.hausdorffReadings) o.detail << h.value << (n < 100 ? "," : "");
  o.detail << " limit defect=" << r.limitCertificate.defect << " n=" << r.largeN
           << " defect=" << r.largeNCertificate.defect;
  o.require(r.mconvex.samples.size() > 0, "m-convexity step ran");
  o.require(r.hausdorffReadings.size() == 3 && r.hausdorffDecreasing, "Hausdorff readings strictly decreasing");
  o.require(r.limitCertificate.verdict == Verdict::ViolationCertified, "limit certificate");
  o.require(std::abs(r.largeNCertificate.defect - kTarget) <= 5e-2, "large-n defect within 5e-2 of target");
}

// Criterion 9: sandwich tightness on non-catalog domains.
void criterion9(Outcome& o) {
  RealPolynomial sphere(2), quartic(2);
  for (int k = 0; k < 4; ++k) {
    std::vector<int> e(4, 0);
    e[k] = 2;
    sphere.add(e, 1);
  }
  sphere.add({0, 0, 0, 0}, -1);
  quartic.add({0, 1, 0, 0}, -1).add({0, 0, 4, 0}, 1).add({0, 0, 2, 2}, 2).add({0, 0, 0, 4}, 1);
  struct Case {
    const char* name;
    ConvexDomain D;
    std::vector<CPoint> pts;
  };
  const std::vector<Case> cases = {
      {"graph-ball", ConvexDomain::graph(DefiningFunction::from_polynomial(sphere), true, CPoint{0.0, 0.0}),
       {CPoint{0.2, 0.1}, CPoint{Complex(-0.3, 0.4), 0.2 * I}, CPoint{0.0, Complex(0.5, 0.5)}}},
      {"graph-quartic", ConvexDomain::graph(DefiningFunction::from_polynomial(quartic), true, CPoint{I, 0.0}),
       {CPoint{I, 0.0}, CPoint{Complex(0.5, 2.0), 0.3}, CPoint{Complex(-1.0, 1.0), Complex(0.2, 0.4)}}},
      {"intersection", example36_domain(), {CPoint{0.5, 0.5}, CPoint{0.3, Complex(0.6, 0.1)}, CPoint{0.4, 0.6}}},
  };
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  MetricOptions opt;
  opt.maxIterations = 40;
  double worstRatio = 0.0;
  for (const auto& c : cases) {
    for (const auto& z : c.pts) {
      o.require(c.D.contains(z), std::string(c.name) + " test point inside");
      for (int k = 0; k < 10; ++k) {
        const CPoint v = normalized(CPoint{Complex(g(rng), g(rng)), Complex(g(rng), g(rng))});
        const auto b = infinitesimal(c.D, z, v);
        worstRatio = std::max(worstRatio, b.hi / b.lo);
        o.require(b.lo > 0.0 && b.hi / b.lo <= 2.0 + 1e-9, std::string(c.name) + " infinitesimal hi/lo <= 2");
      }
    }
    for (std::size_t i = 0; i + 1 < c.pts.size(); ++i) {
      const auto d = distance(c.D, c.pts[i], c.pts[i + 1], opt);
      o.require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo <= d.hi,
                std::string(c.name) + " distance interval finite and ordered");
      o.detail << c.name << ":[" << d.lo << "," << d.hi << "] ";
    }
  }
  o.detail << "worst hi/lo=" << worstRatio;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    void (*run)(Outcome&);
    double budgetSeconds;  // 0: none
  };
  const std::vector<Criterion> criteria = {
      {1, "product certificate on halfplane x disk", criterion1, 10.0},
      {2, "isometric sector slice in sector x disk", criterion2, 0.0},
      {3, "metric axioms on five catalog domains", criterion3, 0.0},
      {4, "no false CAT(0) violations on the disk", criterion4, 0.0},
      {5, "m-convexity: ball, intersection of balls, polydisk", criterion5, 30.0},
      {6, "line type: ball and quartic tube", criterion6, 0.0},
      {7, "distance convergence for dilated disks", criterion7, 0.0},
      {8, "intersection-of-balls pipeline", criterion8, 300.0},
      {9, "sandwich tightness on graph and intersection domains", criterion9, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budgetSeconds > 0.0 && secs > c.budgetSeconds) {
      o.pass = false;
      o.detail << " [over time budget " << c.budgetSeconds << " s]";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
