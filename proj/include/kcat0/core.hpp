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

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kcat0 {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Error raised by every kcat0 operation on a violated precondition.
/// `code` is a short machine-readable identifier, `what()` the message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// A point (or a tangent vector) in C^d.
class CPoint {
 public:
  CPoint() = default;
  explicit CPoint(std::size_t dim) : c_(dim, Complex(0.0, 0.0)) {}
  CPoint(std::initializer_list<Complex> coords) : c_(coords) {}
  explicit CPoint(std::vector<Complex> coords) : c_(std::move(coords)) {}

  std::size_t dim() const { return c_.size(); }
  Complex& operator[](std::size_t i) { return c_[i]; }
  const Complex& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<Complex>& coords() const { return c_; }

  bool finite() const {
    for (const auto& z : c_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  CPoint& operator+=(const CPoint& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CPoint& operator-=(const CPoint& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  CPoint& operator*=(Complex s) {
    for (auto& z : c_) z *= s;
    return *this;
  }
  friend CPoint operator+(CPoint a, const CPoint& b) { return a += b; }
  friend CPoint operator-(CPoint a, const CPoint& b) { return a -= b; }
  friend CPoint operator*(Complex s, CPoint a) { return a *= s; }
  friend CPoint operator*(double s, CPoint a) { return a *= Complex(s, 0.0); }
  friend bool operator==(const CPoint& a, const CPoint& b) { return a.c_ == b.c_; }

  /// Concatenation (z, w) in C^{d1+d2}.
  static CPoint join(const CPoint& a, const CPoint& b) {
    std::vector<Complex> c = a.c_;
    c.insert(c.end(), b.c_.begin(), b.c_.end());
    return CPoint(std::move(c));
  }
  CPoint head(std::size_t n) const {
    return CPoint(std::vector<Complex>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n)));
  }
  CPoint tail(std::size_t from) const {
    return CPoint(std::vector<Complex>(c_.begin() + static_cast<std::ptrdiff_t>(from), c_.end()));
  }

 private:
  std::vector<Complex> c_;
};

/// Hermitian product <a, b> = sum a_k conj(b_k).
inline Complex hermitian(const CPoint& a, const CPoint& b) {
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

/// Real inner product of a and b viewed as vectors of R^{2d}.
inline double real_dot(const CPoint& a, const CPoint& b) { return hermitian(a, b).real(); }

inline double norm2(const CPoint& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::norm(a[i]);
  return s;
}

inline double norm(const CPoint& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s = std::hypot(s, std::abs(a[i]));
  return s;
}

inline CPoint normalized(const CPoint& a) {
  const double n = norm(a);
  if (n == 0.0) throw Error("zero-vector", "cannot normalize the zero vector");
  return (1.0 / n) * a;
}

inline bool is_zero(const CPoint& a) {
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a[i] != Complex(0.0, 0.0)) return false;
  return true;
}

inline void require_dim(const CPoint& z, std::size_t dim, const char* what) {
  if (z.dim() != dim)
    throw Error("dimension-mismatch", std::string(what) + ": expected dimension " +
                                          std::to_string(dim) + ", got " + std::to_string(z.dim()));
}

/// Dense complex square matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n, Complex(0.0, 0.0)) {}
  CMatrix(std::size_t n, std::vector<Complex> rowMajor) : n_(n), a_(std::move(rowMajor)) {
    if (a_.size() != n * n) throw Error("bad-matrix", "matrix entry count does not match n*n");
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMatrix diagonal(const std::vector<Complex>& d) {
    CMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t size() const { return n_; }
  Complex& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  const std::vector<Complex>& data() const { return a_; }

  CPoint operator*(const CPoint& v) const {
    CPoint out(n_);
    for (std::size_t r = 0; r < n_; ++r) {
      Complex s(0.0, 0.0);
      for (std::size_t c = 0; c < n_; ++c) s += (*this)(r, c) * v[c];
      out[r] = s;
    }
    return out;
  }

  CMatrix operator*(const CMatrix& o) const {
    CMatrix out(n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        Complex s(0.0, 0.0);
        for (std::size_t k = 0; k < n_; ++k) s += (*this)(r, k) * o(k, c);
        out(r, c) = s;
      }
    return out;
  }

  CMatrix adjoint() const {
    CMatrix out(n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  /// Gauss-Jordan inverse with partial pivoting; throws on (numerically) singular input.
  CMatrix inverse() const {
    CMatrix a = *this;
    CMatrix inv = identity(n_);
    double scale = 0.0;
    for (const auto& z : a_) scale = std::max(scale, std::abs(z));
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n_; ++r)
        if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
      if (std::abs(a(piv, col)) <= 1e-14 * scale || scale == 0.0)
        throw Error("singular-matrix", "affine map matrix is not invertible");
      if (piv != col)
        for (std::size_t c = 0; c < n_; ++c) {
          std::swap(a(piv, c), a(col, c));
          std::swap(inv(piv, c), inv(col, c));
        }
      const Complex p = a(col, col);
      for (std::size_t c = 0; c < n_; ++c) {
        a(col, c) /= p;
        inv(col, c) /= p;
      }
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == col) continue;
        const Complex f = a(r, col);
        if (f == Complex(0.0, 0.0)) continue;
        for (std::size_t c = 0; c < n_; ++c) {
          a(r, c) -= f * a(col, c);
          inv(r, c) -= f * inv(col, c);
        }
      }
    }
    return inv;
  }

  /// If the matrix is s*U with U unitary, returns |s|; otherwise a negative value.
  double similarity_scale(double tol = 1e-12) const {
    const CMatrix g = adjoint() * (*this);
    const double s2 = g(0, 0).real();
    if (!(s2 > 0.0)) return -1.0;
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        const Complex want = (r == c) ? Complex(s2, 0.0) : Complex(0.0, 0.0);
        if (std::abs(g(r, c) - want) > tol * s2) return -1.0;
      }
    return std::sqrt(s2);
  }

 private:
  std::size_t n_ = 0;
  std::vector<Complex> a_;
};

/// Methods used to obtain a bound; carried by every numeric result.
enum class Method : unsigned {
  ExactChart = 1u << 0,
  ProductMax = 1u << 1,
  AffineInvariance = 1u << 2,
  ProjectionLower = 1u << 3,
  InclusionUpper = 1u << 4,
  SliceUpper = 1u << 5,
  DeltaBound = 1u << 6,
  PathOptimizer = 1u << 7,
};

class MethodSet {
 public:
  MethodSet() = default;
  MethodSet(Method m) : bits_(static_cast<unsigned>(m)) {}  // NOLINT(implicit)
  MethodSet& operator|=(MethodSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend MethodSet operator|(MethodSet a, MethodSet b) { return a |= b; }
  bool has(Method m) const { return (bits_ & static_cast<unsigned>(m)) != 0; }
  unsigned bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }

  std::vector<std::string> names() const {
    static const std::pair<Method, const char*> kNames[] = {
        {Method::ExactChart, "exact-chart"},         {Method::ProductMax, "product-max"},
        {Method::AffineInvariance, "affine-invariance"}, {Method::ProjectionLower, "projection-lower"},
        {Method::InclusionUpper, "inclusion-upper"}, {Method::SliceUpper, "slice-upper"},
        {Method::DeltaBound, "delta-bound"},         {Method::PathOptimizer, "path-optimizer"}};
    std::vector<std::string> out;
    for (const auto& [m, name] : kNames)
      if (has(m)) out.emplace_back(name);
    return out;
  }

 private:
  unsigned bits_ = 0;
};

}  // namespace kcat0
