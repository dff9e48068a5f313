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

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "kcat0/core.hpp"

namespace kcat0 {

/// Polynomial in the real coordinates (Re z_1, Im z_1, ..., Re z_d, Im z_d).
/// A monomial key holds 2d exponents in that order.
class RealPolynomial {
 public:
  using Exponents = std::vector<int>;

  RealPolynomial() = default;
  explicit RealPolynomial(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  const std::map<Exponents, double>& terms() const { return terms_; }

  RealPolynomial& add(Exponents e, double coefficient) {
    if (e.size() != 2 * dim_) throw Error("bad-polynomial", "monomial exponent count must be 2*dim");
    for (int k : e)
      if (k < 0) throw Error("bad-polynomial", "negative exponent");
    terms_[std::move(e)] += coefficient;
    return *this;
  }

  double evaluate(const CPoint& z) const {
    require_dim(z, dim_, "polynomial");
    const auto r = real_coords(z);
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (std::size_t k = 0; k < e.size(); ++k) m *= ipow(r[k], e[k]);
      s += m;
    }
    return s;
  }

  /// Real gradient packed as G_k = dr/dRe z_k + i dr/dIm z_k.
  CPoint gradient(const CPoint& z) const {
    require_dim(z, dim_, "polynomial");
    const auto r = real_coords(z);
    std::vector<double> g(2 * dim_, 0.0);
    for (const auto& [e, c] : terms_)
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        double m = c * e[j];
        for (std::size_t k = 0; k < e.size(); ++k) m *= ipow(r[k], k == j ? e[k] - 1 : e[k]);
        g[j] += m;
      }
    CPoint out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = Complex(g[2 * k], g[2 * k + 1]);
    return out;
  }

  /// Restriction to the complex line t -> x + t w, written in t = s + i tau.
  /// Keys are (power of s, power of tau).
  std::map<std::pair<int, int>, double> restrict_to_line(const CPoint& x, const CPoint& w) const {
    require_dim(x, dim_, "polynomial line base");
    require_dim(w, dim_, "polynomial line direction");
    using Biv = std::map<std::pair<int, int>, double>;
    auto mul = [](const Biv& a, const Biv& b) {
      Biv out;
      for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
      return out;
    };
    // Each real coordinate is affine in (s, tau).
    std::vector<Biv> lin(2 * dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
      lin[2 * k] = {{{0, 0}, x[k].real()}, {{1, 0}, w[k].real()}, {{0, 1}, -w[k].imag()}};
      lin[2 * k + 1] = {{{0, 0}, x[k].imag()}, {{1, 0}, w[k].imag()}, {{0, 1}, w[k].real()}};
    }
    Biv total;
    for (const auto& [e, c] : terms_) {
      Biv m{{{0, 0}, c}};
      for (std::size_t j = 0; j < e.size(); ++j)
        for (int p = 0; p < e[j]; ++p) m = mul(m, lin[j]);
      for (const auto& [k, v] : m) total[k] += v;
    }
    return total;
  }

 private:
  std::vector<double> real_coords(const CPoint& z) const {
    std::vector<double> r(2 * dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
      r[2 * k] = z[k].real();
      r[2 * k + 1] = z[k].imag();
    }
    return r;
  }
  static double ipow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  }

  std::size_t dim_ = 0;
  std::map<Exponents, double> terms_;
};

/// Smooth convex defining function r with Omega = {r < 0}.
struct DefiningFunction {
  std::size_t dim = 0;
  std::function<double(const CPoint&)> value;
  /// Packed real gradient; central differences are used when empty.
  std::function<CPoint(const CPoint&)> grad;
  std::optional<RealPolynomial> polynomial;

  double operator()(const CPoint& z) const { return value(z); }

  CPoint gradient(const CPoint& z) const {
    if (grad) return grad(z);
    CPoint g(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[k]));
      CPoint a = z, b = z;
      a[k] += Complex(h, 0.0);
      b[k] -= Complex(h, 0.0);
      const double dx = (value(a) - value(b)) / (2 * h);
      a = z;
      b = z;
      a[k] += Complex(0.0, h);
      b[k] -= Complex(0.0, h);
      const double dy = (value(a) - value(b)) / (2 * h);
      g[k] = Complex(dx, dy);
    }
    return g;
  }

  static DefiningFunction from_polynomial(RealPolynomial p) {
    DefiningFunction f;
    f.dim = p.dim();
    auto shared = std::make_shared<RealPolynomial>(p);
    f.value = [shared](const CPoint& z) { return shared->evaluate(z); };
    f.grad = [shared](const CPoint& z) { return shared->gradient(z); };
    f.polynomial = std::move(p);
    return f;
  }
};

}  // namespace kcat0
