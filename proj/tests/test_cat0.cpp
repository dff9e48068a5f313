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

#include <gtest/gtest.h>

#include <random>

#include "kcat0/kcat0.hpp"

using namespace kcat0;

namespace {

const Complex I(0.0, 1.0);

double disk_oracle(Complex z, Complex w) { return std::atanh(std::abs((z - w) / (1.0 - std::conj(w) * z))); }

// Hyperbolic midpoint in the disk: move x to 0, halve along the ray, move back.
Complex disk_midpoint_oracle(Complex x, Complex y) {
  const Complex yp = (y - x) / (1.0 - std::conj(x) * y);
  const double r = std::abs(yp);
  const Complex h = std::tanh(0.5 * std::atanh(r)) * (yp / r);
  return (h + x) / (1.0 + std::conj(x) * h);
}

Complex random_in_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), 2 * kPi * u(rng));
}

ConvexDomain halfplane_x_disk() {
  return ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk());
}

}  // namespace

TEST(ConservativeDefect, UsesWorstCaseEnds) {
  const DistanceInterval xy{2.0, 3.0, {}, {}}, zx{1.0, 1.5, {}, {}}, zy{1.0, 2.0, {}, {}}, zm{0.5, 0.7, {}, {}};
  EXPECT_DOUBLE_EQ(conservative_defect(xy, zx, zy, zm), 0.25 - (0.5 * (2.25 + 4.0) - 1.0));
}

TEST(MidpointDefect, ProductCertificateValue) {
  const auto c = product_certificate(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk(), CPoint{I},
                                     CPoint{4.0 * I}, CPoint{0.0});
  const double want = std::pow(0.5 * std::log(2.0), 2);
  EXPECT_NEAR(c.defect, want, 1e-9);
  EXPECT_EQ(c.verdict, Verdict::ViolationCertified);
  EXPECT_LE(c.midpointResidual, 1e-9);
  // K_disk(0, z) = ln(2) / 2 puts z at 1/3.
  EXPECT_NEAR(std::abs(c.z[1] - Complex(1.0 / 3.0, 0.0)), 0.0, 1e-10);
}

TEST(MidpointDefect, HandComputedProductTriple) {
  // d(x,y) = ln 2, m = (2i, 0), z = (2i, 1/3): every z-distance equals ln(2)/2.
  const auto D = halfplane_x_disk();
  const auto c = midpoint_defect(D, CPoint{I, 0.0}, CPoint{4.0 * I, 0.0}, CPoint{2.0 * I, 1.0 / 3.0});
  const double h = 0.5 * std::log(2.0);
  EXPECT_NEAR(c.dzx.lo, h, 1e-12);
  EXPECT_NEAR(c.dzm.lo, h, 1e-12);
  EXPECT_NEAR(c.defect, h * h, 1e-9);
  EXPECT_EQ(c.verdict, Verdict::ViolationCertified);
}

TEST(MidpointDefect, DiskNeverViolates) {
  std::mt19937_64 rng(21);
  const auto D = ConvexDomain::unit_disk();
  for (int k = 0; k < 100; ++k) {
    const Complex x = random_in_disk(rng, 0.9), y = random_in_disk(rng, 0.9), z = random_in_disk(rng, 0.9);
    const auto c = midpoint_defect(D, CPoint{x}, CPoint{y}, CPoint{z});
    EXPECT_EQ(c.verdict, Verdict::NoViolationFound);
    // Independent defect from the Moebius midpoint.
    const Complex m = disk_midpoint_oracle(x, y);
    const double want = std::pow(disk_oracle(z, m), 2) -
                        (0.5 * (std::pow(disk_oracle(z, x), 2) + std::pow(disk_oracle(z, y), 2)) -
                         0.25 * std::pow(disk_oracle(x, y), 2));
    EXPECT_NEAR(c.defect, want, 1e-9);
    EXPECT_LE(c.defect, 1e-9);
  }
}

TEST(MidpointDefect, RejectsOutsidePoints) {
  EXPECT_THROW(midpoint_defect(ConvexDomain::unit_disk(), CPoint{0.0}, CPoint{0.5}, CPoint{1.5}), Error);
}

TEST(Comparison, DiskSatisfiesCat0) {
  const auto D = ConvexDomain::unit_disk();
  const auto r = comparison_test(D, CPoint{Complex(-0.5, 0.1)}, CPoint{Complex(0.6, 0.2)}, CPoint{Complex(0.0, -0.7)},
                                 300, 4);
  EXPECT_EQ(r.samples.size(), 300u);
  EXPECT_LE(r.maxSlack, 1e-9);
  EXPECT_NEAR(r.dab, disk_oracle(Complex(-0.5, 0.1), Complex(0.6, 0.2)), 1e-12);
}

TEST(Comparison, ProductFindsPositiveSlack) {
  const auto r = comparison_test(halfplane_x_disk(), CPoint{I, 0.0}, CPoint{4.0 * I, 0.0}, CPoint{2.0 * I, 1.0 / 3.0},
                                 400, 5);
  EXPECT_GT(r.maxSlack, 1e-3);
}

TEST(Comparison, SameSeedSameSamples) {
  const auto D = ConvexDomain::unit_disk();
  const CPoint a{0.1}, b{Complex(0.0, 0.5)}, c{-0.4};
  const auto r1 = comparison_test(D, a, b, c, 20, 9), r2 = comparison_test(D, a, b, c, 20, 9);
  for (std::size_t i = 0; i < r1.samples.size(); ++i) EXPECT_EQ(r1.samples[i].slack, r2.samples[i].slack);
  EXPECT_THROW(comparison_test(D, a, a, c, 5, 1), Error);
}

TEST(ProductCertificate, Errors) {
  const auto H = ConvexDomain::upper_half_plane();
  const auto Dk = ConvexDomain::unit_disk();
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return std::string("none");
  };
  EXPECT_EQ(code_of([&] { product_certificate(H, Dk, CPoint{I}, CPoint{I}); }), "degenerate-pair");
  // K(i, 1e6 i) / 2 is far beyond what the disk offers along [0, 1) before round-off.
  EXPECT_EQ(code_of([&] { product_certificate(H, Dk, CPoint{I}, CPoint{1e40 * I}, CPoint{0.0}); }),
            "choose-closer-points");
  RealPolynomial p(1);
  p.add({2, 0}, 1).add({0, 2}, 1).add({0, 0}, -1);
  const auto G = ConvexDomain::graph(DefiningFunction::from_polynomial(p), true, CPoint{0.0});
  EXPECT_EQ(code_of([&] { product_certificate(G, Dk, CPoint{0.1}, CPoint{0.2}); }), "not-catalog");
}

TEST(Gromov, ProductAndFourPoint) {
  const auto D = ConvexDomain::unit_disk();
  const CPoint o{0.0}, x{0.5}, y{-0.5};
  // o lies on the geodesic from x to y.
  EXPECT_NEAR(gromov_product(D, o, x, y), 0.0, 1e-12);
  EXPECT_NEAR(gromov_product(D, x, o, y), std::atanh(0.5), 1e-12);

  std::vector<CPoint> line;
  for (double t : {-0.8, -0.3, 0.1, 0.7}) line.push_back(CPoint{t});
  EXPECT_NEAR(four_point_delta(D, line), 0.0, 1e-12);

  // The disk is half-scaled H^2, whose four-point constant is at most log 2.
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    std::vector<CPoint> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(CPoint{random_in_disk(rng, 0.999)});
    const double d = four_point_delta(D, pts);
    EXPECT_GE(d, -1e-12);
    EXPECT_LE(d, 0.5 * std::log(2.0) + 1e-9);
  }
}
