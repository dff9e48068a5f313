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

// Textbook forms with the |v| normalization at the disk center.
double disk_oracle(Complex z, Complex w) {
  const double rho = std::abs((z - w) / (1.0 - std::conj(w) * z));
  return 0.5 * std::log((1 + rho) / (1 - rho));
}

double half_plane_oracle(Complex z, Complex w) {
  return 0.5 * std::acosh(1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag()));
}

Complex random_in_disk(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r * std::sqrt(u(rng)), 2 * kPi * u(rng));
}

}  // namespace

TEST(PlanarDistance, DiskMatchesPseudoHyperbolicFormula) {
  std::mt19937_64 rng(1);
  const auto D = ConvexDomain::unit_disk();
  for (int k = 0; k < 500; ++k) {
    const Complex z = random_in_disk(rng, 0.95), w = random_in_disk(rng, 0.95);
    EXPECT_NEAR(planar_distance(D, z, w), disk_oracle(z, w), 1e-10 * (1 + disk_oracle(z, w)));
  }
  EXPECT_DOUBLE_EQ(planar_distance(D, 0.0, 0.5), std::atanh(0.5));
}

TEST(PlanarDistance, ShiftedDiskIsScaled) {
  const auto D = ConvexDomain::disk(Complex(2.0, -1.0), 3.0);
  EXPECT_NEAR(planar_distance(D, Complex(2.0, -1.0), Complex(3.5, -1.0)), std::atanh(0.5), 1e-14);
}

TEST(PlanarDistance, HalfPlaneMatchesArcosh) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(-3, 3), im(0.01, 5);
  const auto H = ConvexDomain::upper_half_plane();
  for (int k = 0; k < 500; ++k) {
    const Complex z(re(rng), im(rng)), w(re(rng), im(rng));
    EXPECT_NEAR(planar_distance(H, z, w), half_plane_oracle(z, w), 1e-9 * (1 + half_plane_oracle(z, w)));
  }
  EXPECT_NEAR(planar_distance(H, I, 4.0 * I), std::log(2.0), 1e-15);
}

TEST(PlanarDistance, RotatedHalfPlane) {
  const auto R = ConvexDomain::right_half_plane();
  EXPECT_NEAR(planar_distance(R, 1.0, Complex(2.0, 3.0)), half_plane_oracle(I, Complex(-3.0, 2.0)), 1e-14);
}

TEST(PlanarDistance, QuarterSectorThroughSquaring) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(0.01, kPi / 2 - 0.01), r(0.1, 3.0);
  const auto S = ConvexDomain::sector(0.0, 0.0, kPi / 2);
  for (int k = 0; k < 200; ++k) {
    const Complex z = std::polar(r(rng), a(rng)), w = std::polar(r(rng), a(rng));
    EXPECT_NEAR(planar_distance(S, z, w), half_plane_oracle(z * z, w * w), 1e-9);
  }
}

TEST(PlanarDistance, GeneralSector) {
  // Opening pi/3 at vertex 1+i, rotated by 0.4: w -> ((w - v) e^{-0.4 i})^3.
  const Complex v(1.0, 1.0);
  const auto S = ConvexDomain::sector(v, 0.4, 0.4 + kPi / 3);
  const Complex z = v + std::polar(1.0, 0.6), w = v + std::polar(2.5, 1.3);
  const auto to_h = [&](Complex p) { return std::pow((p - v) * std::polar(1.0, -0.4), 3); };
  EXPECT_NEAR(planar_distance(S, z, w), half_plane_oracle(to_h(z), to_h(w)), 1e-10);
}

TEST(PlanarDistance, RejectsOutsidePoints) {
  EXPECT_THROW(planar_distance(ConvexDomain::unit_disk(), 0.0, 1.0), Error);
  EXPECT_THROW(planar_distance(ConvexDomain::upper_half_plane(), I, -I), Error);
}

TEST(PlanarMetric, Normalization) {
  EXPECT_DOUBLE_EQ(planar_metric(ConvexDomain::unit_disk(), 0.0, Complex(0.6, 0.8)), 1.0);
  EXPECT_DOUBLE_EQ(planar_metric(ConvexDomain::upper_half_plane(), 2.0 * I, 1.0), 0.25);
}

TEST(PlanarMetric, IsInfinitesimalDistance) {
  const std::vector<std::pair<ConvexDomain, Complex>> cases = {
      {ConvexDomain::unit_disk(), Complex(0.3, -0.5)},
      {ConvexDomain::upper_half_plane(), Complex(-1.0, 0.2)},
      {ConvexDomain::sector(0.0, 0.0, kPi / 2), Complex(0.5, 1.5)},
      {ConvexDomain::sector(Complex(1.0, 0.0), 1.0, 2.5), Complex(1.0, 1.0)},
  };
  const Complex v = std::polar(1.0, 0.7);
  for (const auto& [D, z] : cases) {
    const double h = 1e-6;
    const double fd = planar_distance(D, z, z + h * v) / h;
    EXPECT_NEAR(planar_metric(D, z, v), fd, 1e-5 * fd);
  }
}

TEST(Chart, RoundTripAndDiskImage) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(0.05, 1.2), r(0.1, 3.0);
  const auto c = chart(ConvexDomain::sector(0.0, 0.0, 1.25));
  for (int k = 0; k < 100; ++k) {
    const Complex z = std::polar(r(rng), a(rng));
    const Complex xi = c.forward(z);
    EXPECT_LT(std::abs(xi), 1.0);
    EXPECT_NEAR(std::abs(c.inverse(xi) - z), 0.0, 1e-10);
  }
}

TEST(Chart, DerivativeMatchesDifferenceQuotient) {
  const auto c = chart(ConvexDomain::sector(Complex(0.5, 0.0), 0.2, 1.7)).with_automorphism(Complex(0.1, 0.2), 0.3);
  const Complex z = Complex(0.5, 0.0) + std::polar(1.3, 0.9);
  const double h = 1e-6;
  const Complex fd = (c.forward(z + h) - c.forward(z - h)) / (2 * h);
  EXPECT_NEAR(std::abs(c.derivative(z) - fd), 0.0, 1e-7);
}

TEST(Chart, AutomorphismPreservesDistance) {
  const auto base = chart(ConvexDomain::unit_disk());
  const auto moved = base.with_automorphism(Complex(0.4, -0.3), 1.1);
  const Complex z(0.2, 0.1), w(-0.5, 0.6);
  EXPECT_NEAR(moved.distance(z, w), base.distance(z, w), 1e-13);
  EXPECT_THROW(base.with_automorphism(1.0, 0.0), Error);
}

TEST(PlanarGeodesic, SplitsDistanceLinearly) {
  const std::vector<std::tuple<ConvexDomain, Complex, Complex>> cases = {
      {ConvexDomain::unit_disk(), Complex(-0.7, 0.1), Complex(0.5, 0.6)},
      {ConvexDomain::upper_half_plane(), Complex(-2.0, 0.1), Complex(3.0, 2.0)},
      {ConvexDomain::sector(0.0, 0.0, kPi / 2), Complex(3.0, 0.1), Complex(0.1, 2.0)},
  };
  for (const auto& [D, z, w] : cases) {
    const double d = planar_distance(D, z, w);
    for (double t : {0.1, 0.25, 0.5, 0.9}) {
      const Complex g = planar_geodesic(D, z, w, t);
      EXPECT_NEAR(planar_distance(D, z, g), t * d, 1e-9);
      EXPECT_NEAR(planar_distance(D, g, w), (1 - t) * d, 1e-9);
    }
  }
}

TEST(PlanarDistance, NearBoundaryStaysAccurate) {
  const auto H = ConvexDomain::upper_half_plane();
  const double y = 1e-12;
  // Vertical segment: distance is half the log ratio.
  EXPECT_NEAR(planar_distance(H, Complex(0.0, y), Complex(0.0, 1.0)), 0.5 * std::log(1.0 / y), 1e-9);
  const auto D = ConvexDomain::unit_disk();
  EXPECT_NEAR(planar_distance(D, 0.0, 1.0 - 1e-12), 0.5 * std::log((2.0 - 1e-12) / 1e-12), 1e-3);
}
