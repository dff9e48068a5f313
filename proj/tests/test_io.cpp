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

#include "kcat0/io.hpp"
#include "kcat0/kcat0.hpp"

using namespace kcat0;

namespace {

const Complex I(0.0, 1.0);

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() + ": " + e.what();
  }
  return "none";
}

std::vector<ConvexDomain> every_kind() {
  RealPolynomial p(2);
  p.add({0, 1, 0, 0}, -1).add({0, 0, 4, 0}, 1).add({0, 0, 2, 2}, 2).add({0, 0, 0, 4}, 1);
  return {
      ConvexDomain::disk(Complex(1.0, -2.0), 0.5),
      ConvexDomain::half_plane(Complex(0.0, 1.0), Complex(1.0, 1.0)),
      ConvexDomain::sector(Complex(1.0, 1.0), 0.2, 1.4),
      ConvexDomain::ball(CPoint{0.5, I}, 2.0),
      ConvexDomain::polydisk(CPoint{0.0, 1.0}, {1.0, 3.0}),
      ConvexDomain::product(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk()),
      ConvexDomain::affine_image(CMatrix::diagonal({2.0, I}), CPoint{1.0, 0.0},
                                 ConvexDomain::ball(CPoint{0.0, 0.0}, 1.0)),
      example36_domain(),
      ConvexDomain::graph(DefiningFunction::from_polynomial(p), true, CPoint{I, 0.0}),
  };
}

}  // namespace

TEST(DomainJson, RoundTripsEveryKind) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (const auto& D : every_kind()) {
    const Json j = domain_to_json(D);
    const ConvexDomain back = domain_from_json(j);
    EXPECT_EQ(back.kind(), D.kind());
    EXPECT_EQ(domain_to_json(back), j) << j.dump();
    // Same text through the parser.
    EXPECT_EQ(domain_to_json(parse_domain(j.dump())), j);
    for (int k = 0; k < 200; ++k) {
      CPoint z(D.dim());
      for (std::size_t i = 0; i < D.dim(); ++i) z[i] = Complex(2 * g(rng), 2 * g(rng));
      EXPECT_EQ(back.contains(z), D.contains(z));
    }
  }
}

TEST(DomainJson, RealNumbersAreComplex) {
  const auto D = parse_domain(R"({"type": "disk", "center": 0.5, "radius": 2})");
  EXPECT_TRUE(D.contains(CPoint{Complex(2.4, 0.0)}));
  const auto A = parse_domain(
      R"({"type": "affine_image", "matrix": [2], "inner": {"type": "disk", "center": 0, "radius": 1}})");
  EXPECT_TRUE(A.contains(CPoint{1.9}));
  EXPECT_FALSE(A.contains(CPoint{2.1}));
}

TEST(DomainJson, SpecErrorsCarryAPath) {
  EXPECT_EQ(error_of([] { parse_domain(R"({"radius": 1})"); }), "bad-spec: /: missing field 'type'");
  EXPECT_EQ(error_of([] { parse_domain(R"({"type": "torus"})"); }), "bad-spec: /type: unknown domain type 'torus'");
  EXPECT_EQ(error_of([] { parse_domain(R"({"type": "disk", "center": [0, 0], "radius": "1"})"); }),
            "bad-spec: /radius: expected a number");
  EXPECT_EQ(error_of([] {
              parse_domain(R"({"type": "product", "left": {"type": "disk", "center": [0], "radius": 1},
                               "right": {"type": "disk", "center": 0, "radius": 1}})");
            }),
            "bad-spec: /left/center: expected [re, im]");
  EXPECT_EQ(error_of([] { parse_domain(R"({"type": "intersection", "members": [{"type": 3}]})"); }),
            "bad-spec: /members/0/type: expected a string");
  EXPECT_EQ(error_of([] {
              parse_domain(R"({"type": "affine_image", "matrix": [1, 0, 0],
                               "inner": {"type": "ball", "center": [0, 0], "radius": 1}})");
            }),
            "bad-spec: /matrix: expected d*d row-major entries");
  // Constructor errors pass through with their own code.
  EXPECT_EQ(error_of([] { parse_domain(R"({"type": "disk", "center": 0, "radius": -1})"); }).substr(0, 10),
            "bad-domain");
}

TEST(DomainJson, ParseErrorReportsLineAndColumn) {
  const std::string e = error_of([] { parse_domain("{\n  \"type\": \"disk\",\n  \"radius\" 1\n}"); });
  EXPECT_EQ(e.rfind("parse-error: line 3, column 12", 0), 0u) << e;
}

TEST(ReportJson, DistanceAndCertificate) {
  const auto d = distance(ConvexDomain::unit_disk(), CPoint{0.0}, CPoint{0.5});
  const Json jd = to_json(d);
  EXPECT_EQ(jd["lo"], jd["hi"]);
  EXPECT_TRUE(jd["exact"].get<bool>());

  const auto c = product_certificate(ConvexDomain::upper_half_plane(), ConvexDomain::unit_disk(), CPoint{I},
                                     CPoint{4.0 * I}, CPoint{0.0});
  const Json jc = to_json(c);
  EXPECT_EQ(jc["schema"], kSchema);
  EXPECT_EQ(jc["verdict"], "violation-certified");
  EXPECT_DOUBLE_EQ(jc["defect"].get<double>(), c.defect);
  EXPECT_EQ(jc["points"]["y"], Json::parse("[[0.0, 4.0], [0.0, 0.0]]"));
}

TEST(ReportJson, LineTypeInfinityIsAString) {
  EXPECT_EQ(order_json(kInfiniteOrder), "infinite");
  EXPECT_EQ(order_json(4), 4);
}
