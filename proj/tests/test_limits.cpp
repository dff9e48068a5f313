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

#include "kcat0/kcat0.hpp"

using namespace kcat0;

namespace {

const Complex I(0.0, 1.0);

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST(Hausdorff, ShiftedDisks) {
  const auto a = ConvexDomain::disk(0.0, 1.0), b = ConvexDomain::disk(1.0, 1.0);
  const auto h = hausdorff(a, b, 5.0, 2048);
  EXPECT_NEAR(h.value, 1.0, h.mesh + 1e-9);
  EXPECT_GT(h.mesh, 0.0);
  EXPECT_EQ(h.directions, 2048u);
  EXPECT_NEAR(hausdorff(a, a, 5.0, 512).value, 0.0, 1e-12);
}

TEST(Hausdorff, ParallelHalfPlanesInAWindow) {
  const auto h0 = ConvexDomain::upper_half_plane();
  const auto h1 = ConvexDomain::half_plane(Complex(0.0, 0.1), I);
  const auto h = hausdorff(h0, h1, 2.0, 4096);
  // Interior gap 0.1; the window corners add about 0.1^2 / (2R).
  EXPECT_NEAR(h.value, 0.1, h.mesh + 1e-2);
  EXPECT_GE(h.value, 0.1 - 1e-9);
}

TEST(Hausdorff, Errors) {
  const auto d = ConvexDomain::unit_disk();
  EXPECT_EQ(code_of([&] { hausdorff(d, ConvexDomain::ball(CPoint{0.0, 0.0}, 1.0), 1.0); }), "dimension-mismatch");
  EXPECT_EQ(code_of([&] { hausdorff(d, d, 0.0); }), "bad-window");
}

TEST(Scaling, DilationOfConeIsConstant) {
  const auto S = ConvexDomain::sector(0.0, 0.0, kPi / 2);
  const auto seq = dilation_sequence(S, S);
  for (double n : {2.0, 10.0}) EXPECT_NEAR(hausdorff(seq.domain_at(n), S, 1.0, 1024).value, 0.0, 1e-9);
  EXPECT_EQ(seq.map(3.0).A(0, 0), Complex(3.0));
}

TEST(Scaling, DilatedDiskApproachesHalfPlane) {
  // The disk of radius 1 centered at i touches R at 0; n D -> upper half-plane.
  const auto D = ConvexDomain::disk(I, 1.0);
  const auto H = ConvexDomain::upper_half_plane();
  double prev = kInf;
  for (double n : {1.0, 10.0, 100.0}) {
    const double v = hausdorff(dilate(D, n), H, 1.0, 2048).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
  // Circle height at |x| = 1: n - sqrt(n^2 - 1) ~ 1 / (2 n).
  EXPECT_NEAR(prev, 100.0 - std::sqrt(100.0 * 100.0 - 1.0), 2e-3);
}

TEST(Scaling, Lemma32ProductCone) {
  const auto HxD = ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk());
  const auto seq = scaling_lemma32(HxD);
  ASSERT_TRUE(seq.claimedLimit.has_value());
  const auto* p = seq.claimedLimit->as<ProductNode>();
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->left.kind(), DomainKind::HalfPlane);
  EXPECT_TRUE(p->left.contains(CPoint{I}));
  EXPECT_FALSE(p->left.contains(CPoint{-I}));
  EXPECT_EQ(seq.domain_at(5.0).kind(), DomainKind::Product);
  EXPECT_EQ(code_of([&] { scaling_lemma32(ConvexDomain::unit_disk()); }), "not-on-boundary");
}

TEST(Scaling, Lemma32Sector) {
  const auto S = ConvexDomain::sector(0.0, 0.3, 1.5);
  const auto seq = scaling_lemma32(S);
  ASSERT_TRUE(seq.claimedLimit.has_value());
  EXPECT_NEAR(hausdorff(*seq.claimedLimit, S, 1.0, 1024).value, 0.0, 1e-6);
}

TEST(Frankel, ExpFlatSlice) {
  // f(0, w) = exp(-1/|w|): f / |w|^n peaks at |w| = 1/n.
  const auto f = [](Complex w) { return std::abs(w) > 0.0 ? std::exp(-1.0 / std::abs(w)) : 0.0; };
  FrankelOptions opt;
  opt.radial = 256;
  opt.angular = 16;
  const auto r = frankel_2b(f, {2.0, 4.0, 8.0}, opt);
  ASSERT_EQ(r.steps.size(), 3u);
  for (const auto& st : r.steps) {
    EXPECT_NEAR(std::abs(st.zn), 1.0 / st.n, 1e-3);
    EXPECT_NEAR(st.an, std::exp(-st.n) * std::pow(st.n, st.n), 1e-6 * st.an);
    EXPECT_TRUE(st.inequalityHolds);
    EXPECT_LE(st.maxRatio, 1.0 + 1e-9);
  }
  EXPECT_EQ(r.sequence.kind, ScalingKind::Frankel2b);
  EXPECT_EQ(r.sequence.map(4.0).A(0, 0), Complex(1.0 / r.steps[1].fzn));
  EXPECT_EQ(code_of([&] { r.sequence.map(3.0); }), "unknown-step");
}

TEST(Frankel, FiniteTypeSliceHitsGridEdges) {
  const auto quartic = [](Complex w) { return std::pow(std::abs(w), 4); };
  FrankelOptions opt;
  opt.radial = 64;
  opt.angular = 8;
  EXPECT_EQ(code_of([&] { frankel_2b(quartic, {2.0}, opt); }), "enlarge-search-radius");
  EXPECT_EQ(code_of([&] { frankel_2b(quartic, {6.0}, opt); }), "grid-boundary");
}

TEST(Convergence, DilatedDisksGap) {
  const auto D = ConvexDomain::unit_disk();
  std::vector<std::pair<double, ConvexDomain>> seq;
  for (double n : {10.0, 100.0, 1000.0}) seq.push_back({n, dilate(D, 1.0 + 1.0 / n)});
  const CPoint x{0.0}, y{0.5};
  const auto t = convergence_check(seq, D, {{x, y}});
  ASSERT_EQ(t.maxGap.size(), 3u);
  EXPECT_TRUE(t.monotone);
  for (const auto& [n, g] : t.maxGap) {
    const double want = std::atanh(0.5) - std::atanh(0.5 / (1.0 + 1.0 / n));
    EXPECT_NEAR(g, want, 1e-9);
  }
  EXPECT_NE(t.csv().find("n,pairIndex,gap"), std::string::npos);
}

TEST(Convergence, PairOutsideIsReported) {
  const auto D = ConvexDomain::unit_disk();
  std::vector<std::pair<double, ConvexDomain>> seq{{2.0, dilate(D, 0.5)}};
  EXPECT_EQ(code_of([&] { convergence_check(seq, D, {{CPoint{0.0}, CPoint{0.7}}}); }), "pair-outside");
}

TEST(Example36, DomainAndLimit) {
  const auto O = example36_domain();
  EXPECT_TRUE(O.contains(CPoint{0.5, 0.5}));
  EXPECT_FALSE(O.contains(CPoint{0.0, 0.0}));
  EXPECT_TRUE(O.closure_contains(CPoint{0.0, 0.0}, 1e-12));
  const auto L = example36_limit();
  EXPECT_TRUE(L.contains(CPoint{Complex(1e-3, 5.0), Complex(2.0, -7.0)}));
  EXPECT_FALSE(L.contains(CPoint{Complex(-1e-3, 0.0), 1.0}));
  // Dilations approach the limit.
  const double h1 = hausdorff(dilate(O, 10.0), L, 1.0, 1024).value;
  const double h2 = hausdorff(dilate(O, 100.0), L, 1.0, 1024).value;
  EXPECT_LT(h2, h1);
}
