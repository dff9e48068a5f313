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

// Exact Kobayashi geometry of planar catalog domains.
//
// Normalization: k(0; v) = |v| on the unit disk, so the disk distance is
// artanh of the pseudo-hyperbolic distance and the upper half-plane carries
// |v| / (2 Im z).

#pragma once

#include <cmath>

#include "kcat0/core.hpp"
#include "kcat0/domain.hpp"

namespace kcat0 {

namespace detail {

/// artanh(rho) where 1 - rho^2 = oneMinusRho2, stable as rho -> 1.
inline double artanh_from(double rho, double oneMinusRho2) {
  if (rho < 0.5) return std::atanh(rho);
  return 0.5 * std::log((1.0 + rho) * (1.0 + rho) / oneMinusRho2);
}

}  // namespace detail

/// Kobayashi distance of the unit disk.
inline double disk_distance(Complex z, Complex w) {
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0))
    throw Error("outside-domain", "disk_distance: arguments must lie in the open unit disk");
  if (z == w) return 0.0;
  const Complex den = 1.0 - std::conj(w) * z;
  const double rho = std::abs(z - w) / std::abs(den);
  const double az = std::abs(z), aw = std::abs(w);
  const double one = (1.0 - az) * (1.0 + az) * (1.0 - aw) * (1.0 + aw) / std::norm(den);
  return detail::artanh_from(std::min(rho, 1.0), one);
}

/// Kobayashi distance of the upper half-plane.
inline double upper_half_plane_distance(Complex z, Complex w) {
  if (z == w) return 0.0;
  const double rho = std::abs(z - w) / std::abs(z - std::conj(w));
  const double one = 4.0 * z.imag() * w.imag() / std::norm(z - std::conj(w));
  return detail::artanh_from(std::min(rho, 1.0), one);
}

/// Biholomorphism of a planar catalog domain onto the unit disk:
/// z -> rot (z - shift), then an optional power map onto the upper half-plane,
/// an optional Cayley transform, and an optional disk automorphism.
class ConformalChart {
 public:
  enum class Tag { Disk, HalfPlane, Sector };

  Tag tag() const { return tag_; }
  double power() const { return power_; }

  Complex forward(Complex z) const { return automorphism(to_disk(to_half(z))); }

  Complex derivative(Complex z) const {
    const Complex u0 = rot_ * (z - shift_);
    Complex d = rot_;
    Complex u = u0;
    if (power_ != 1.0) {
      u = std::pow(u0, power_);
      d *= power_ * u / u0;
    }
    Complex zeta = u;
    if (cayley_) {
      d *= Complex(0.0, 2.0) / ((u + Complex(0.0, 1.0)) * (u + Complex(0.0, 1.0)));
      zeta = (u - Complex(0.0, 1.0)) / (u + Complex(0.0, 1.0));
    }
    if (hasAut_) d *= phase_ * (1.0 - std::norm(a_)) / ((1.0 - std::conj(a_) * zeta) * (1.0 - std::conj(a_) * zeta));
    return d;
  }

  Complex inverse(Complex xi) const {
    Complex zeta = xi;
    if (hasAut_) {
      const Complex eta = xi / phase_;
      zeta = (eta + a_) / (1.0 + std::conj(a_) * eta);
    }
    Complex u = zeta;
    if (cayley_) u = Complex(0.0, 1.0) * (1.0 + zeta) / (1.0 - zeta);
    if (power_ != 1.0) u = std::pow(u, 1.0 / power_);
    return u / rot_ + shift_;
  }

  /// Same chart post-composed with xi -> phase (xi - a) / (1 - conj(a) xi).
  ConformalChart with_automorphism(Complex a, double phaseAngle) const {
    if (!(std::abs(a) < 1.0)) throw Error("bad-automorphism", "automorphism center must lie in the disk");
    ConformalChart c = *this;
    if (hasAut_) throw Error("bad-automorphism", "chart already carries an automorphism");
    c.hasAut_ = true;
    c.a_ = a;
    c.phase_ = std::polar(1.0, phaseAngle);
    return c;
  }

  /// Kobayashi distance via the chart; half-plane charts stay in half-plane
  /// coordinates for accuracy near the boundary.
  double distance(Complex z, Complex w) const {
    if (cayley_ && !hasAut_) return upper_half_plane_distance(to_half(z), to_half(w));
    return disk_distance(forward(z), forward(w));
  }

  double metric(Complex z, Complex v) const {
    if (cayley_ && !hasAut_) {
      const Complex u0 = rot_ * (z - shift_);
      Complex du = rot_;
      Complex u = u0;
      if (power_ != 1.0) {
        u = std::pow(u0, power_);
        du *= power_ * u / u0;
      }
      return std::abs(du * v) / (2.0 * u.imag());
    }
    const Complex f = forward(z);
    const double af = std::abs(f);
    return std::abs(derivative(z) * v) / ((1.0 - af) * (1.0 + af));
  }

  static ConformalChart for_disk(Complex center, double radius) {
    ConformalChart c;
    c.tag_ = Tag::Disk;
    c.shift_ = center;
    c.rot_ = 1.0 / radius;
    return c;
  }
  static ConformalChart for_half_plane(Complex point, Complex inwardNormal) {
    ConformalChart c;
    c.tag_ = Tag::HalfPlane;
    c.shift_ = point;
    c.rot_ = Complex(0.0, 1.0) * std::conj(inwardNormal);
    c.cayley_ = true;
    return c;
  }
  static ConformalChart for_sector(Complex vertex, double alpha, double beta) {
    ConformalChart c;
    c.tag_ = Tag::Sector;
    c.shift_ = vertex;
    c.rot_ = std::polar(1.0, -alpha);
    c.power_ = kPi / (beta - alpha);
    c.cayley_ = true;
    return c;
  }

  /// Point of the upper half-plane for Cayley charts (identity map otherwise).
  Complex to_half(Complex z) const {
    Complex u = rot_ * (z - shift_);
    if (power_ != 1.0) u = std::pow(u, power_);
    return u;
  }

 private:
  Complex to_disk(Complex u) const {
    return cayley_ ? (u - Complex(0.0, 1.0)) / (u + Complex(0.0, 1.0)) : u;
  }
  Complex automorphism(Complex zeta) const {
    return hasAut_ ? phase_ * (zeta - a_) / (1.0 - std::conj(a_) * zeta) : zeta;
  }

  Tag tag_ = Tag::Disk;
  Complex shift_{0.0, 0.0};
  Complex rot_{1.0, 0.0};
  double power_ = 1.0;
  bool cayley_ = false;
  bool hasAut_ = false;
  Complex a_{0.0, 0.0};
  Complex phase_{1.0, 0.0};
};

inline bool is_planar_catalog(const ConvexDomain& D) {
  const auto k = D.kind();
  return k == DomainKind::Disk || k == DomainKind::HalfPlane || k == DomainKind::Sector;
}

inline ConformalChart chart(const ConvexDomain& D) {
  if (const auto* n = D.as<DiskNode>()) return ConformalChart::for_disk(n->center, n->radius);
  if (const auto* n = D.as<HalfPlaneNode>()) return ConformalChart::for_half_plane(n->point, n->normal);
  if (const auto* n = D.as<SectorNode>()) return ConformalChart::for_sector(n->vertex, n->alpha, n->beta);
  throw Error("no-chart", "conformal charts exist only for disks, half-planes and sectors");
}

namespace detail {
inline void require_planar_points(const ConvexDomain& D, std::initializer_list<Complex> pts) {
  for (Complex z : pts)
    if (!D.contains(CPoint{z})) throw Error("outside-domain", "planar point is not inside the domain");
}
}  // namespace detail

inline double planar_distance(const ConvexDomain& D, Complex z, Complex w) {
  detail::require_planar_points(D, {z, w});
  return chart(D).distance(z, w);
}

inline double planar_metric(const ConvexDomain& D, Complex z, Complex v) {
  detail::require_planar_points(D, {z});
  return chart(D).metric(z, v);
}

/// Unit-disk geodesic from a to b at fraction t of the distance.
inline Complex disk_geodesic(Complex a, Complex b, double t) {
  const Complex bp = (b - a) / (1.0 - std::conj(a) * b);
  const double r = std::abs(bp);
  if (r == 0.0) return a;
  const double D = disk_distance(0.0, bp);
  const Complex xi = std::tanh(t * D) * (bp / r);
  return (xi + a) / (1.0 + std::conj(a) * xi);
}

/// Point at fraction t in [0, 1] along the geodesic from z to w.
inline Complex planar_geodesic(const ConvexDomain& D, Complex z, Complex w, double t) {
  detail::require_planar_points(D, {z, w});
  if (t == 0.0 || z == w) return z;
  if (t == 1.0) return w;
  const ConformalChart c = chart(D);
  return c.inverse(disk_geodesic(c.forward(z), c.forward(w), t));
}

}  // namespace kcat0
