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

// Command-line front end. run() is separate from main() so tests can drive it.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kcat0/io.hpp"
#include "kcat0/kcat0.hpp"

namespace kcat0::cli {

/// Parses one complex literal: "a+bi", "2i", "-i", "1/3", "0.5-2e-3i".
inline Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error("bad-literal", "empty complex literal");
  auto real_of = [&](const std::string& t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    const auto slash = t.find('/');
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(t.substr(0, slash), &used);
      if (used != slash) throw Error("bad-literal", "cannot parse '" + raw + "'");
      const std::string den = t.substr(slash + 1);
      const double d = std::stod(den, &used);
      if (used != den.size() || d == 0.0) throw Error("bad-literal", "cannot parse '" + raw + "'");
      return num / d;
    }
    const double v = std::stod(t, &used);
    if (used != t.size()) throw Error("bad-literal", "cannot parse '" + raw + "'");
    return v;
  };
  // Split into signed terms at +/- that do not follow an exponent marker.
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if ((c == '+' || c == '-') && i > 0 && s[i - 1] != 'e' && s[i - 1] != 'E') {
      terms.push_back(cur);
      cur.clear();
    }
    cur += c;
  }
  terms.push_back(cur);
  Complex z(0.0, 0.0);
  try {
    for (const auto& t : terms) {
      if (t.empty()) throw Error("bad-literal", "cannot parse '" + raw + "'");
      if (t.back() == 'i' || t.back() == 'j') {
        std::string coef = t.substr(0, t.size() - 1);
        if (!coef.empty() && coef.back() == '*') coef.pop_back();
        z += Complex(0.0, real_of(coef));
      } else {
        if (t == "+" || t == "-") throw Error("bad-literal", "cannot parse '" + raw + "'");
        z += Complex(real_of(t), 0.0);
      }
    }
  } catch (const std::logic_error&) {
    throw Error("bad-literal", "cannot parse '" + raw + "'");
  }
  return z;
}

/// Comma-separated coordinates.
inline CPoint parse_point(const std::string& s) {
  std::vector<Complex> c;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) c.push_back(parse_complex(item));
  if (c.empty()) throw Error("bad-literal", "empty point");
  CPoint p(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i];
  return p;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item).real());
  return out;
}

inline ConvexDomain builtin_domain(const std::string& name) {
  const auto H = ConvexDomain::upper_half_plane();
  const auto D = ConvexDomain::unit_disk();
  if (name == "disk") return D;
  if (name == "halfplane") return H;
  if (name == "right-halfplane") return ConvexDomain::right_half_plane();
  if (name == "sector-quarter") return ConvexDomain::sector(0.0, 0.0, kPi / 2);
  if (name == "halfplane-x-disk") return ConvexDomain::product(H, D);
  if (name == "sector-x-disk") return ConvexDomain::product(ConvexDomain::sector(0.0, 0.0, kPi / 2), D);
  if (name == "ball") return ConvexDomain::ball(CPoint{0.0, 0.0}, 1.0);
  if (name == "polydisk") return ConvexDomain::polydisk(CPoint{0.0, 0.0}, {1.0, 1.0});
  if (name == "example36") return example36_domain();
  if (name == "example36-limit") return example36_limit();
  throw Error("unknown-builtin", "unknown builtin domain '" + name + "'");
}

inline DefiningFunction builtin_defining_function(const std::string& name) {
  if (name == "ball") {
    RealPolynomial p(2);
    p.add({2, 0, 0, 0}, 1).add({0, 2, 0, 0}, 1).add({0, 0, 2, 0}, 1).add({0, 0, 0, 2}, 1).add({0, 0, 0, 0}, -1);
    return DefiningFunction::from_polynomial(p);
  }
  if (name == "quartic") {
    RealPolynomial p(2);
    p.add({0, 1, 0, 0}, -1).add({0, 0, 4, 0}, 1).add({0, 0, 2, 2}, 2).add({0, 0, 0, 4}, 1);
    return DefiningFunction::from_polynomial(p);
  }
  if (name == "flat") {
    DefiningFunction f;
    f.dim = 2;
    f.value = [](const CPoint& z) {
      const double a = std::norm(z[1]);
      return -z[0].imag() + (a > 0.0 ? std::exp(-1.0 / a) : 0.0);
    };
    return f;
  }
  throw Error("unknown-builtin", "unknown builtin defining function '" + name + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io-error", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct DomainArgs {
  std::string builtin;
  std::string file;

  ConvexDomain resolve() const {
    if (!file.empty()) return parse_domain(read_file(file));
    if (!builtin.empty()) return builtin_domain(builtin);
    throw Error("no-domain", "give --builtin NAME or --domain FILE");
  }
};

inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("KCAT0_SEED")) {
    try {
      return static_cast<std::uint64_t>(std::stoull(s));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

inline void add_domain_options(CLI::App* app, DomainArgs& d) {
  app->add_option("--builtin", d.builtin, "Builtin domain name");
  app->add_option("--domain", d.file, "JSON domain specification file");
}

/// Runs the CLI; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"kcat0: Kobayashi distances, CAT(0) certificates and rescaling limits"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = default_seed();
  std::string output, format = "json";
  app.add_option("--seed", seed, "RNG seed (default: $KCAT0_SEED or 1)");
  app.add_option("--output,-o", output, "Write the report to a file instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  DomainArgs dom, other;
  std::string xs, ys, zs, ws, mode = "midpoint";
  double tol = -1.0;
  int samples = 200;

  auto* certify = app.add_subcommand("certify", "Midpoint, product or comparison certificates");
  add_domain_options(certify, dom);
  certify->add_option("--mode", mode, "midpoint | product | comparison")
      ->check(CLI::IsMember({"midpoint", "product", "comparison"}));
  certify->add_option("--x", xs, "First point")->required();
  certify->add_option("--y", ys, "Second point")->required();
  certify->add_option("--z", zs, "Third point (midpoint and comparison modes)");
  certify->add_option("--w", ws, "Base point in the second factor (product mode)");
  certify->add_option("--tol", tol, "Midpoint residual tolerance");
  certify->add_option("--samples", samples, "Comparison samples");

  std::string from, to;
  auto* dist = app.add_subcommand("distance", "Kobayashi distance interval");
  add_domain_options(dist, dom);
  dist->add_option("--from", from, "First point")->required();
  dist->add_option("--to", to, "Second point")->required();

  double R = 2.0;
  int m = 2;
  std::optional<double> C;
  std::string ps, us, vs;
  auto* mconvex = app.add_subcommand("mconvex", "Local m-convexity check or exponent fit");
  add_domain_options(mconvex, dom);
  mconvex->add_option("--R", R, "Window radius");
  mconvex->add_option("--m", m, "Target m");
  mconvex->add_option("--C", C, "Constant to test against");
  mconvex->add_option("--samples", samples, "Number of base samples");
  mconvex->add_option("--fit-point", ps, "Boundary point for an exponent fit");
  mconvex->add_option("--fit-approach", us, "Approach direction for the fit");
  mconvex->add_option("--fit-tangent", vs, "Tangent direction for the fit");

  std::string fname = "quartic", at;
  bool numeric = false;
  auto* linetype = app.add_subcommand("linetype", "Line type of a defining function at a boundary point");
  linetype->add_option("--function", fname, "ball | quartic | flat");
  linetype->add_option("--domain", dom.file, "JSON graph domain with polynomial terms");
  linetype->add_option("--at", at, "Boundary point (default 0, or (1,0) for the ball)");
  linetype->add_flag("--numeric", numeric, "Force the numeric order path");

  std::string limitMode = "convergence", nlist, profile = "exp";
  auto* limits = app.add_subcommand("limits", "Hausdorff readings, scaling sequences, convergence");
  add_domain_options(limits, dom);
  limits->add_option("--mode", limitMode, "hausdorff | convergence | lemma32 | frankel")
      ->check(CLI::IsMember({"hausdorff", "convergence", "lemma32", "frankel"}));
  limits->add_option("--other-builtin", other.builtin, "Second domain (hausdorff)");
  limits->add_option("--other-domain", other.file, "Second domain file (hausdorff)");
  limits->add_option("--R", R, "Window radius");
  limits->add_option("--n", nlist, "Comma-separated sequence indices");
  limits->add_option("--from", from, "First point of the test pair (convergence)");
  limits->add_option("--to", to, "Second point of the test pair (convergence)");
  limits->add_option("--profile", profile, "exp | quartic (frankel)")->check(CLI::IsMember({"exp", "quartic"}));

  double largeN = 1e6;
  auto* ex36 = app.add_subcommand("example36", "Run the intersection-of-balls pipeline");
  ex36->add_option("--large-n", largeN, "Dilation used for the large-n midpoint defect");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  auto emit = [&](const std::string& text) {
    if (output.empty()) {
      out << text;
      if (!text.empty() && text.back() != '\n') out << '\n';
      return;
    }
    std::ofstream f(output);
    if (!f) throw Error("io-error", "cannot write '" + output + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
  };
  auto emit_json = [&](const Json& j) { emit(j.dump(2)); };

  try {
    if (certify->parsed()) {
      const ConvexDomain D = dom.resolve();
      if (mode == "product") {
        const auto* p = D.as<ProductNode>();
        if (!p) throw Error("not-product", "product mode needs a product domain");
        std::optional<CPoint> w;
        if (!ws.empty()) w = parse_point(ws);
        const Cat0Certificate c = product_certificate(p->left, p->right, parse_point(xs), parse_point(ys), w);
        emit_json(to_json(c));
        return c.verdict == Verdict::ViolationCertified ? 2 : 0;
      }
      if (zs.empty()) throw Error("missing-point", "--z is required in this mode");
      if (mode == "comparison") {
        const ComparisonReport r = comparison_test(D, parse_point(xs), parse_point(ys), parse_point(zs), samples, seed);
        if (format == "csv") {
          std::ostringstream os;
          os.precision(17);
          os << "s,t,slack\n";
          for (const auto& s : r.samples) os << s.s << ',' << s.t << ',' << s.slack << '\n';
          emit(os.str());
        } else {
          emit_json(to_json(r));
        }
        return r.maxSlack > 1e-9 ? 2 : 0;
      }
      const Cat0Certificate c = midpoint_defect(D, parse_point(xs), parse_point(ys), parse_point(zs), tol);
      emit_json(to_json(c));
      return c.verdict == Verdict::ViolationCertified ? 2 : 0;
    }
    if (dist->parsed()) {
      const ConvexDomain D = dom.resolve();
      const CPoint x = parse_point(from), y = parse_point(to);
      const DistanceInterval d = distance(D, x, y);
      if (format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "lo,hi\n" << d.lo << ',' << d.hi << '\n';
        emit(os.str());
      } else {
        Json j = {{"schema", kSchema}, {"kind", "distance"}, {"from", to_json(x)}, {"to", to_json(y)}};
        j["distance"] = to_json(d);
        j["tolerance"] = d.exact() ? 0.0 : d.width();
        emit_json(j);
      }
      return 0;
    }
    if (mconvex->parsed()) {
      const ConvexDomain D = dom.resolve();
      if (!ps.empty()) {
        const MConvexityReport r = exponent_fit(D, parse_point(ps), parse_point(us), parse_point(vs),
                                                {1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
        emit_json(to_json(r));
        return 0;
      }
      const MConvexityReport r = local_m_convex_check(D, R, m, samples, seed, C);
      emit_json(to_json(r));
      return 0;
    }
    if (linetype->parsed()) {
      DefiningFunction f;
      if (!dom.file.empty()) {
        const ConvexDomain D = parse_domain(read_file(dom.file));
        const auto* g = D.as<GraphNode>();
        if (!g) throw Error("not-graph", "linetype needs a graph domain");
        f = g->r;
      } else {
        f = builtin_defining_function(fname);
      }
      CPoint x = at.empty() ? (fname == "ball" && dom.file.empty() ? CPoint{1.0, 0.0} : CPoint(f.dim)) : parse_point(at);
      const LineTypeResult r = line_type(f, x, 256, numeric ? OrderMethod::Numeric : OrderMethod::Auto);
      emit_json(to_json(r));
      return 0;
    }
    if (limits->parsed()) {
      if (limitMode == "hausdorff") {
        const HausdorffReading h = hausdorff(dom.resolve(), other.resolve(), R);
        Json j = to_json(h);
        j["schema"] = kSchema;
        j["kind"] = "hausdorff";
        emit_json(j);
        return 0;
      }
      if (limitMode == "frankel") {
        std::function<double(Complex)> f0;
        if (profile == "exp")
          f0 = [](Complex w) { return std::abs(w) > 0.0 ? std::exp(-1.0 / std::abs(w)) : 0.0; };
        else
          f0 = [](Complex w) { return std::pow(std::abs(w), 4); };
        const FrankelResult fr = frankel_2b(f0, nlist.empty() ? std::vector<double>{2, 4, 8, 16} : parse_list(nlist));
        Json steps = Json::array();
        for (const auto& s : fr.steps) steps.push_back(to_json(s));
        emit_json({{"schema", kSchema}, {"kind", "frankel2b"}, {"steps", steps}});
        return 0;
      }
      const ConvexDomain D = dom.resolve();
      if (limitMode == "lemma32") {
        const ScalingSequence s = scaling_lemma32(D);
        Json j = {{"schema", kSchema}, {"kind", scaling_kind_name(s.kind)}, {"notes", s.notes}};
        j["claimed_limit"] = s.claimedLimit ? domain_to_json(*s.claimedLimit) : Json(nullptr);
        emit_json(j);
        return 0;
      }
      // Convergence of the dilations (1 + 1/n) D toward D.
      const std::vector<double> ns = nlist.empty() ? std::vector<double>{10, 100, 1000} : parse_list(nlist);
      std::vector<std::pair<double, ConvexDomain>> seq;
      for (double n : ns) seq.push_back({n, dilate(D, 1.0 + 1.0 / n)});
      const ConvergenceTable t = convergence_check(seq, D, {{parse_point(from), parse_point(to)}});
      if (format == "csv")
        emit(t.csv());
      else
        emit_json(to_json(t));
      return 0;
    }
    if (ex36->parsed()) {
      Example36Options opt;
      opt.seed = seed;
      opt.largeN = largeN;
      emit_json(to_json(example36(opt)));
      return 0;
    }
    if (selftest->parsed()) {
      struct Check {
        std::string name;
        bool ok;
      };
      std::vector<Check> checks;
      const auto H = ConvexDomain::upper_half_plane();
      const auto Dk = ConvexDomain::unit_disk();
      checks.push_back({"disk-distance", std::abs(distance(Dk, CPoint{0.0}, CPoint{0.5}).lo - std::atanh(0.5)) < 1e-12});
      checks.push_back({"halfplane-distance",
                        std::abs(distance(H, CPoint{Complex(0, 1)}, CPoint{Complex(0, 4)}).lo - std::log(2.0)) < 1e-12});
      const Cat0Certificate c = product_certificate(H, Dk, CPoint{Complex(0, 1)}, CPoint{Complex(0, 4)}, CPoint{0.0});
      checks.push_back({"product-certificate", std::abs(c.defect - std::pow(0.5 * std::log(2.0), 2)) < 1e-9 &&
                                                   c.verdict == Verdict::ViolationCertified});
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(-0.6, 0.6);
      bool tri = true;
      for (int i = 0; i < 200; ++i) {
        const CPoint a{Complex(u(rng), u(rng))}, b{Complex(u(rng), u(rng))}, z{Complex(u(rng), u(rng))};
        const double ab = distance(Dk, a, b).lo, az = distance(Dk, a, z).lo, zb = distance(Dk, z, b).lo;
        tri = tri && ab <= az + zb + 1e-9 && std::abs(ab - distance(Dk, b, a).lo) <= 1e-12;
      }
      checks.push_back({"disk-metric-axioms", tri});
      const LineTypeResult lt = line_type(builtin_defining_function("quartic"), CPoint{0.0, 0.0});
      checks.push_back({"quartic-line-type", lt.L == 4});
      Json j = {{"schema", kSchema}, {"kind", "selftest"}};
      bool all = true;
      for (const auto& ck : checks) {
        j["checks"][ck.name] = ck.ok ? "pass" : "fail";
        all = all && ck.ok;
      }
      j["result"] = all ? "pass" : "fail";
      emit_json(j);
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace kcat0::cli
