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

// JSON domain specifications and report serialization (needs nlohmann/json).
//
// Complex numbers are [re, im]; points are lists of complex numbers.

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kcat0/cat0.hpp"
#include "kcat0/convexity.hpp"
#include "kcat0/core.hpp"
#include "kcat0/domain.hpp"
#include "kcat0/limits.hpp"
#include "kcat0/metric.hpp"

namespace kcat0 {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "kcat0/1";

namespace detail {

[[noreturn]] inline void spec_error(const std::string& path, const std::string& what) {
  throw Error("bad-spec", (path.empty() ? std::string("/") : path) + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) spec_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) spec_error(path, std::string("missing field '") + key + "'");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) spec_error(path, "expected a number");
  return j.get<double>();
}

inline Complex complex_from(const Json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) spec_error(path, "expected [re, im]");
  return Complex(number(j[0], path + "/0"), number(j[1], path + "/1"));
}

inline CPoint point_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) spec_error(path, "expected a non-empty list of [re, im]");
  CPoint p(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = complex_from(j[i], path + "/" + std::to_string(i));
  return p;
}

}  // namespace detail

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const CPoint& p) {
  Json a = Json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) a.push_back(to_json(p[i]));
  return a;
}

inline Json to_json(const RealPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"exponents", e}, {"coefficient", c}});
  return terms;
}

inline Json domain_to_json(const ConvexDomain& D) {
  switch (D.kind()) {
    case DomainKind::Disk: {
      const auto* n = D.as<DiskNode>();
      return {{"type", "disk"}, {"center", to_json(n->center)}, {"radius", n->radius}};
    }
    case DomainKind::HalfPlane: {
      const auto* n = D.as<HalfPlaneNode>();
      return {{"type", "halfplane"}, {"point", to_json(n->point)}, {"normal", to_json(n->normal)}};
    }
    case DomainKind::Sector: {
      const auto* n = D.as<SectorNode>();
      return {{"type", "sector"}, {"vertex", to_json(n->vertex)}, {"alpha", n->alpha}, {"beta", n->beta}};
    }
    case DomainKind::Ball: {
      const auto* n = D.as<BallNode>();
      return {{"type", "ball"}, {"center", to_json(n->center)}, {"radius", n->radius}};
    }
    case DomainKind::Polydisk: {
      const auto* n = D.as<PolydiskNode>();
      return {{"type", "polydisk"}, {"centers", to_json(n->centers)}, {"radii", n->radii}};
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      return {{"type", "product"}, {"left", domain_to_json(n->left)}, {"right", domain_to_json(n->right)}};
    }
    case DomainKind::AffineImage: {
      const auto* n = D.as<AffineImageNode>();
      Json m = Json::array();
      for (std::size_t r = 0; r < n->A.size(); ++r)
        for (std::size_t c = 0; c < n->A.size(); ++c) m.push_back(to_json(n->A(r, c)));
      return {{"type", "affine_image"}, {"matrix", m}, {"offset", to_json(n->b)}, {"inner", domain_to_json(n->inner)}};
    }
    case DomainKind::Intersection: {
      Json m = Json::array();
      for (const auto& x : D.as<IntersectionNode>()->members) m.push_back(domain_to_json(x));
      return {{"type", "intersection"}, {"members", m}};
    }
    case DomainKind::Graph: {
      const auto* n = D.as<GraphNode>();
      Json j = {{"type", "graph"}, {"dimension", D.dim()}, {"c_proper", D.c_proper()}};
      if (n->anchor) j["anchor"] = to_json(*n->anchor);
      if (n->r.polynomial) j["terms"] = to_json(*n->r.polynomial);
      return j;
    }
  }
  throw Error("bad-domain", "unknown domain kind");
}

inline ConvexDomain domain_from_json(const Json& j, const std::string& path = "") {
  using detail::field;
  const Json& t = field(j, "type", path);
  if (!t.is_string()) detail::spec_error(path + "/type", "expected a string");
  const std::string type = t.get<std::string>();
  auto sub = [&](const char* k) { return path + "/" + k; };
  try {
    if (type == "disk")
      return ConvexDomain::disk(detail::complex_from(field(j, "center", path), sub("center")),
                                detail::number(field(j, "radius", path), sub("radius")));
    if (type == "halfplane")
      return ConvexDomain::half_plane(detail::complex_from(field(j, "point", path), sub("point")),
                                      detail::complex_from(field(j, "normal", path), sub("normal")));
    if (type == "sector")
      return ConvexDomain::sector(detail::complex_from(field(j, "vertex", path), sub("vertex")),
                                  detail::number(field(j, "alpha", path), sub("alpha")),
                                  detail::number(field(j, "beta", path), sub("beta")));
    if (type == "ball")
      return ConvexDomain::ball(detail::point_from(field(j, "center", path), sub("center")),
                                detail::number(field(j, "radius", path), sub("radius")));
    if (type == "polydisk") {
      const Json& r = field(j, "radii", path);
      if (!r.is_array()) detail::spec_error(sub("radii"), "expected a list of numbers");
      std::vector<double> radii;
      for (std::size_t i = 0; i < r.size(); ++i) radii.push_back(detail::number(r[i], sub("radii")));
      return ConvexDomain::polydisk(detail::point_from(field(j, "centers", path), sub("centers")), radii);
    }
    if (type == "product")
      return ConvexDomain::product(domain_from_json(field(j, "left", path), sub("left")),
                                   domain_from_json(field(j, "right", path), sub("right")));
    if (type == "affine_image") {
      ConvexDomain inner = domain_from_json(field(j, "inner", path), sub("inner"));
      const std::size_t d = inner.dim();
      const Json& m = field(j, "matrix", path);
      if (!m.is_array() || m.size() != d * d) detail::spec_error(sub("matrix"), "expected d*d row-major entries");
      CMatrix A(d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) A(r, c) = detail::complex_from(m[r * d + c], sub("matrix"));
      CPoint b = j.contains("offset") ? detail::point_from(j["offset"], sub("offset")) : CPoint(d);
      return ConvexDomain::affine_image(A, b, inner);
    }
    if (type == "intersection") {
      const Json& m = field(j, "members", path);
      if (!m.is_array()) detail::spec_error(sub("members"), "expected a list of domains");
      std::vector<ConvexDomain> members;
      for (std::size_t i = 0; i < m.size(); ++i)
        members.push_back(domain_from_json(m[i], sub("members") + "/" + std::to_string(i)));
      return ConvexDomain::intersection(members);
    }
    if (type == "graph") {
      const std::size_t d = static_cast<std::size_t>(detail::number(field(j, "dimension", path), sub("dimension")));
      RealPolynomial p(d);
      const Json& terms = field(j, "terms", path);
      if (!terms.is_array()) detail::spec_error(sub("terms"), "expected a list of monomials");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = sub("terms") + "/" + std::to_string(i);
        const Json& e = field(terms[i], "exponents", tp);
        if (!e.is_array()) detail::spec_error(tp + "/exponents", "expected a list of integers");
        p.add(e.get<std::vector<int>>(), detail::number(field(terms[i], "coefficient", tp), tp + "/coefficient"));
      }
      const bool cp = j.value("c_proper", true);
      std::optional<CPoint> anchor;
      if (j.contains("anchor")) anchor = detail::point_from(j["anchor"], sub("anchor"));
      return ConvexDomain::graph(DefiningFunction::from_polynomial(p), cp, anchor);
    }
  } catch (const nlohmann::json::exception& e) {
    detail::spec_error(path, e.what());
  }
  detail::spec_error(sub("type"), "unknown domain type '" + type + "'");
}

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error("parse-error", "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

inline ConvexDomain parse_domain(const std::string& text) { return domain_from_json(parse_json_text(text)); }

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const MethodSet& m) { return m.names(); }

inline Json to_json(const DistanceInterval& d) {
  Json j = {{"lo", d.lo}, {"hi", d.hi}, {"exact", d.exact()}, {"methods", to_json(d.methods)}};
  if (!d.warnings.empty()) j["warnings"] = d.warnings;
  return j;
}

inline Json to_json(const Cat0Certificate& c) {
  Json j = {{"schema", kSchema},
            {"kind", "midpoint-certificate"},
            {"points", {{"x", to_json(c.x)}, {"y", to_json(c.y)}, {"z", to_json(c.z)}, {"m", to_json(c.m)}}},
            {"distances", {{"xy", to_json(c.dxy)}, {"zx", to_json(c.dzx)}, {"zy", to_json(c.dzy)}, {"zm", to_json(c.dzm)}}},
            {"midpoint_residual", c.midpointResidual},
            {"tolerance", c.tolerance},
            {"defect", c.defect},
            {"verdict", verdict_name(c.verdict)}};
  if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
  return j;
}

inline Json to_json(const ComparisonReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back({{"s", s.s}, {"t", s.t}, {"slack", s.slack}});
  return {{"schema", kSchema},
          {"kind", "comparison-report"},
          {"triangle", {to_json(r.a), to_json(r.b), to_json(r.c)}},
          {"sides", {{"ab", r.dab}, {"ac", r.dac}, {"bc", r.dbc}}},
          {"max_slack", r.maxSlack},
          {"samples", samples}};
}

inline Json to_json(const MConvexityReport& r) {
  Json j = {{"schema", kSchema},
            {"kind", "m-convexity-report"},
            {"sample_count", r.samples.size()},
            {"fitted_exponent", r.fittedExponent},
            {"fitted_constant", r.fittedConstant},
            {"window_radius", std::isfinite(r.windowRadius) ? Json(r.windowRadius) : Json(nullptr)},
            {"verdict", r.pass ? "pass" : "fail"}};
  if (r.targetM) j["target_m"] = *r.targetM;
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  return j;
}

inline Json order_json(int k) { return k == kInfiniteOrder ? Json("infinite") : Json(k); }

inline Json to_json(const LineTypeResult& r) {
  Json lines = Json::array();
  for (const auto& [w, k] : r.perLineOrders) lines.push_back({{"direction", to_json(w)}, {"order", order_json(k)}});
  return {{"schema", kSchema},
          {"kind", "line-type"},
          {"base_point", to_json(r.basePoint)},
          {"L", order_json(r.L)},
          {"extremal_direction", to_json(r.extremalDirection)},
          {"lines", lines}};
}

inline Json to_json(const HausdorffReading& h) {
  return {{"R", h.R}, {"value", h.value}, {"mesh", h.mesh}, {"directions", h.directions}};
}

inline Json to_json(const FrankelStep& s) {
  Json j = {{"n", s.n},
            {"z_n", to_json(s.zn)},
            {"a_n", s.an},
            {"f_z_n", s.fzn},
            {"max_ratio", s.maxRatio},
            {"inequality_holds", s.inequalityHolds}};
  if (s.hausdorff) j["hausdorff"] = to_json(*s.hausdorff);
  return j;
}

inline Json to_json(const ConvergenceTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back({{"n", r.n}, {"pair", r.pairIndex}, {"gap", r.gap}});
  Json mx = Json::array();
  for (const auto& [n, g] : t.maxGap) mx.push_back({{"n", n}, {"max_gap", g}});
  return {{"schema", kSchema}, {"kind", "convergence-table"}, {"rows", rows}, {"max_gap", mx}, {"monotone", t.monotone}};
}

inline Json to_json(const Example36Report& r) {
  Json h = Json::array();
  for (const auto& [n, reading] : r.hausdorffReadings) {
    Json e = to_json(reading);
    e["n"] = n;
    h.push_back(e);
  }
  return {{"schema", kSchema},
          {"kind", "example36"},
          {"target_defect", r.target},
          {"m_convexity", to_json(r.mconvex)},
          {"dilation_hausdorff", h},
          {"hausdorff_decreasing", r.hausdorffDecreasing},
          {"limit_certificate", to_json(r.limitCertificate)},
          {"large_n", r.largeN},
          {"large_n_certificate", to_json(r.largeNCertificate)}};
}

}  // namespace kcat0
