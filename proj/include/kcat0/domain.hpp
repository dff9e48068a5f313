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

// Convex domains in C^d as immutable expression trees.
//
// Catalog nodes (disk, half-plane, sector, ball, polydisk) answer every
// boundary query in closed form. Product, intersection and affine-image nodes
// recurse into their children; the affine image is exact for ray and slice
// queries and for boundary distances under similarities. Graph nodes
// {r < 0} fall back to the membership-oracle numerics.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "kcat0/core.hpp"
#include "kcat0/defining_function.hpp"
#include "kcat0/detail/convex_numerics.hpp"

namespace kcat0 {

struct DomainNode;

enum class DomainKind { Disk, HalfPlane, Sector, Ball, Polydisk, Product, AffineImage, Intersection, Graph };

/// Closest boundary point together with the unit outward normal there.
struct BoundaryPoint {
  CPoint point;
  CPoint normal;
  double distance = 0.0;
};

class PlanarSlice;

class ConvexDomain {
 public:
  ConvexDomain() = default;

  // Catalog constructors.
  static ConvexDomain disk(Complex center, double radius);
  /// {z : Re((z - point) conj(normal)) > 0}; the normal is normalized.
  static ConvexDomain half_plane(Complex point, Complex inwardNormal);
  /// vertex + {arg in (alpha, beta)}; an opening of exactly pi yields a half-plane.
  static ConvexDomain sector(Complex vertex, double alpha, double beta);
  static ConvexDomain ball(CPoint center, double radius);
  static ConvexDomain polydisk(CPoint centers, std::vector<double> radii);
  static ConvexDomain product(ConvexDomain left, ConvexDomain right);
  /// {A x + b : x in inner}.
  static ConvexDomain affine_image(CMatrix A, CPoint b, ConvexDomain inner);
  static ConvexDomain intersection(std::vector<ConvexDomain> members);
  /// {r < 0}; C-properness is declared, not detected.
  static ConvexDomain graph(DefiningFunction r, bool cProper, std::optional<CPoint> anchor = std::nullopt);

  // Frequently used shorthands.
  static ConvexDomain unit_disk() { return disk(0.0, 1.0); }
  static ConvexDomain upper_half_plane() { return half_plane(0.0, Complex(0.0, 1.0)); }
  static ConvexDomain right_half_plane() { return half_plane(0.0, Complex(1.0, 0.0)); }

  bool valid() const { return node_ != nullptr; }
  DomainKind kind() const;
  std::size_t dim() const;
  bool c_proper() const;
  const DomainNode& node() const { return *node_; }
  template <class T>
  const T* as() const;

  bool contains(const CPoint& z) const;
  /// Membership in the closure, up to `tol` in gauge units.
  bool closure_contains(const CPoint& z, double tol = 1e-12) const;
  /// Convex function negative inside and zero on the boundary.
  double gauge(const CPoint& z) const;
  /// Real gradient of the gauge, packed as d/dRe + i d/dIm.
  CPoint gauge_gradient(const CPoint& z) const;
  /// sup{t : z + s u in D for s in [0, t)}.
  double ray_exit(const CPoint& z, const CPoint& u) const;

  double delta(const CPoint& z) const;
  double delta_dir(const CPoint& z, const CPoint& v) const;
  /// Boundary distance of the slice {zeta : z + zeta w in D} at 0, in zeta units.
  double slice_delta(const CPoint& z, const CPoint& w) const;
  BoundaryPoint nearest_boundary(const CPoint& z) const;
  /// Closest point of the closure; empty where no projection is available.
  std::optional<CPoint> project(const CPoint& z) const;
  /// Some interior point, if one can be produced.
  std::optional<CPoint> anchor() const;
  PlanarSlice slice(const CPoint& p, const CPoint& v) const;

 private:
  explicit ConvexDomain(std::shared_ptr<const DomainNode> n) : node_(std::move(n)) {}
  void require_inside(const CPoint& z, const char* what) const;

  std::shared_ptr<const DomainNode> node_;
};

struct DiskNode {
  Complex center;
  double radius;
};
struct HalfPlaneNode {
  Complex point;
  Complex normal;  // unit, inward
};
struct SectorNode {
  Complex vertex;
  double alpha;
  double beta;
  Complex normal_alpha() const { return Complex(0.0, 1.0) * std::polar(1.0, alpha); }
  Complex normal_beta() const { return Complex(0.0, -1.0) * std::polar(1.0, beta); }
};
struct BallNode {
  CPoint center;
  double radius;
};
struct PolydiskNode {
  CPoint centers;
  std::vector<double> radii;
};
struct ProductNode {
  ConvexDomain left;
  ConvexDomain right;
};
struct AffineImageNode {
  CMatrix A;
  CMatrix Ainv;
  CMatrix AinvAdj;  // (A^{-1})^H, maps inner normals to outer normals
  CPoint b;
  ConvexDomain inner;
  double similarity;  // |s| when A = s U with U unitary, else negative
  CPoint to_inner(const CPoint& z) const { return Ainv * (z - b); }
  CPoint to_outer(const CPoint& x) const { return A * x + b; }
};
struct IntersectionNode {
  std::vector<ConvexDomain> members;
};
struct GraphNode {
  DefiningFunction r;
  bool cProper;
  std::optional<CPoint> anchor;
};

struct DomainNode {
  std::variant<DiskNode, HalfPlaneNode, SectorNode, BallNode, PolydiskNode, ProductNode, AffineImageNode,
               IntersectionNode, GraphNode>
      v;
  std::size_t dim;
  bool cProper;
};

template <class T>
const T* ConvexDomain::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}

/// The planar convex set {zeta : p + zeta v in D}.
///
/// For catalog-based domains the slice is the intersection of explicit planar
/// catalog pieces; a single piece carries the exact-chart tag. Graph-based
/// slices are numeric and answer through the parent's membership oracle.
class PlanarSlice {
 public:
  PlanarSlice(ConvexDomain parent, CPoint base, CPoint direction, std::vector<ConvexDomain> pieces, bool numeric)
      : parent_(std::move(parent)),
        base_(std::move(base)),
        dir_(std::move(direction)),
        pieces_(std::move(pieces)),
        numeric_(numeric) {}

  const ConvexDomain& parent() const { return parent_; }
  const CPoint& base() const { return base_; }
  const CPoint& direction() const { return dir_; }
  const std::vector<ConvexDomain>& pieces() const { return pieces_; }
  bool numeric() const { return numeric_; }
  bool exact() const { return !numeric_ && pieces_.size() == 1; }
  /// The whole plane: the parent contains the full complex line.
  bool unbounded_line() const { return !numeric_ && pieces_.empty(); }
  std::optional<ConvexDomain> exact_node() const {
    if (exact()) return pieces_.front();
    return std::nullopt;
  }

  CPoint lift(Complex zeta) const { return base_ + zeta * dir_; }
  bool contains(Complex zeta) const { return parent_.contains(lift(zeta)); }
  double delta(Complex zeta) const;
  /// Nearest boundary point of the slice from zeta (planar).
  BoundaryPoint nearest_boundary(Complex zeta) const;

 private:
  ConvexDomain parent_;
  CPoint base_;
  CPoint dir_;
  std::vector<ConvexDomain> pieces_;
  bool numeric_;
};

// ---------------------------------------------------------------------------
// Construction

inline ConvexDomain ConvexDomain::disk(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("bad-domain", "disk radius must be positive");
  return ConvexDomain(std::make_shared<DomainNode>(DomainNode{DiskNode{center, radius}, 1, true}));
}

inline ConvexDomain ConvexDomain::half_plane(Complex point, Complex inwardNormal) {
  const double n = std::abs(inwardNormal);
  if (!(n > 0.0)) throw Error("bad-domain", "half-plane normal must be nonzero");
  // Unit normals are kept as given so serialization round-trips bit for bit.
  const Complex unit = std::abs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon() ? inwardNormal : inwardNormal / n;
  return ConvexDomain(std::make_shared<DomainNode>(DomainNode{HalfPlaneNode{point, unit}, 1, true}));
}

inline ConvexDomain ConvexDomain::sector(Complex vertex, double alpha, double beta) {
  const double opening = beta - alpha;
  if (!(opening > 0.0) || opening > kPi + 1e-12)
    throw Error("bad-domain", "sector opening must lie in (0, pi]");
  if (std::abs(opening - kPi) <= 1e-12) return half_plane(vertex, std::polar(1.0, alpha + 0.5 * kPi));
  return ConvexDomain(std::make_shared<DomainNode>(DomainNode{SectorNode{vertex, alpha, beta}, 1, true}));
}

inline ConvexDomain ConvexDomain::ball(CPoint center, double radius) {
  if (center.dim() == 0) throw Error("bad-domain", "ball dimension must be at least 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("bad-domain", "ball radius must be positive");
  const std::size_t d = center.dim();
  return ConvexDomain(std::make_shared<DomainNode>(DomainNode{BallNode{std::move(center), radius}, d, true}));
}

inline ConvexDomain ConvexDomain::polydisk(CPoint centers, std::vector<double> radii) {
  if (centers.dim() == 0 || centers.dim() != radii.size())
    throw Error("bad-domain", "polydisk needs one radius per coordinate");
  for (double r : radii)
    if (!(r > 0.0)) throw Error("bad-domain", "polydisk radii must be positive");
  const std::size_t d = centers.dim();
  return ConvexDomain(
      std::make_shared<DomainNode>(DomainNode{PolydiskNode{std::move(centers), std::move(radii)}, d, true}));
}

inline ConvexDomain ConvexDomain::product(ConvexDomain left, ConvexDomain right) {
  if (!left.valid() || !right.valid()) throw Error("bad-domain", "product of empty domain");
  const std::size_t d = left.dim() + right.dim();
  const bool cp = left.c_proper() && right.c_proper();
  return ConvexDomain(
      std::make_shared<DomainNode>(DomainNode{ProductNode{std::move(left), std::move(right)}, d, cp}));
}

inline ConvexDomain ConvexDomain::affine_image(CMatrix A, CPoint b, ConvexDomain inner) {
  if (!inner.valid()) throw Error("bad-domain", "affine image of empty domain");
  if (A.size() != inner.dim() || b.dim() != inner.dim())
    throw Error("dimension-mismatch", "affine map does not match the inner dimension");
  CMatrix inv = A.inverse();
  CMatrix invAdj = inv.adjoint();
  const double sim = A.similarity_scale();
  const std::size_t d = inner.dim();
  const bool cp = inner.c_proper();
  return ConvexDomain(std::make_shared<DomainNode>(DomainNode{
      AffineImageNode{std::move(A), std::move(inv), std::move(invAdj), std::move(b), std::move(inner), sim}, d,
      cp}));
}

inline ConvexDomain ConvexDomain::intersection(std::vector<ConvexDomain> members) {
  if (members.empty()) throw Error("bad-domain", "intersection needs at least one member");
  const std::size_t d = members.front().dim();
  bool cp = false;
  for (const auto& m : members) {
    if (m.dim() != d) throw Error("dimension-mismatch", "intersection members differ in dimension");
    cp = cp || m.c_proper();
  }
  return ConvexDomain(std::make_shared<DomainNode>(DomainNode{IntersectionNode{std::move(members)}, d, cp}));
}

inline ConvexDomain ConvexDomain::graph(DefiningFunction r, bool cProper, std::optional<CPoint> anchor) {
  if (r.dim == 0 || !r.value) throw Error("bad-domain", "graph node needs a defining function");
  if (anchor) require_dim(*anchor, r.dim, "graph anchor");
  const std::size_t d = r.dim;
  return ConvexDomain(
      std::make_shared<DomainNode>(DomainNode{GraphNode{std::move(r), cProper, std::move(anchor)}, d, cProper}));
}

inline DomainKind ConvexDomain::kind() const { return static_cast<DomainKind>(node_->v.index()); }
inline std::size_t ConvexDomain::dim() const { return node_->dim; }
inline bool ConvexDomain::c_proper() const { return node_->cProper; }

inline void ConvexDomain::require_inside(const CPoint& z, const char* what) const {
  require_dim(z, dim(), what);
  if (!contains(z)) throw Error("outside-domain", std::string(what) + ": point is not inside the domain");
}

// ---------------------------------------------------------------------------
// Planar helpers

namespace detail {

inline double halfplane_signed(Complex z, Complex p, Complex n) { return ((z - p) * std::conj(n)).real(); }

inline double halfplane_exit(Complex z, Complex u, Complex p, Complex n) {
  const double rate = (u * std::conj(n)).real();
  if (rate >= 0.0) return kInf;
  return std::max(0.0, halfplane_signed(z, p, n)) / (-rate);
}

/// Exit time of |w + t u| < R for w inside (any dimension).
inline double ball_exit(const CPoint& w, const CPoint& u, double R) {
  const double uu = norm2(u);
  if (uu == 0.0) return kInf;
  const double b = real_dot(w, u);
  const double c = norm2(w) - R * R;
  if (c >= 0.0) return 0.0;
  const double disc = std::sqrt(b * b - uu * c);
  return b > 0.0 ? -c / (b + disc) : (disc - b) / uu;
}

inline Complex project_halfplane(Complex z, Complex p, Complex n) {
  const double s = halfplane_signed(z, p, n);
  return s >= 0.0 ? z : z - s * n;
}

inline Complex project_disk(Complex z, Complex c, double R) {
  const double r = std::abs(z - c);
  return r <= R ? z : c + (R / r) * (z - c);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Membership and gauge

inline bool ConvexDomain::contains(const CPoint& z) const {
  require_dim(z, dim(), "contains");
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          return std::abs(z[0] - n.center) < n.radius;
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return detail::halfplane_signed(z[0], n.point, n.normal) > 0.0;
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          return detail::halfplane_signed(z[0], n.vertex, n.normal_alpha()) > 0.0 &&
                 detail::halfplane_signed(z[0], n.vertex, n.normal_beta()) > 0.0;
        } else if constexpr (std::is_same_v<T, BallNode>) {
          return norm(z - n.center) < n.radius;
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          for (std::size_t i = 0; i < z.dim(); ++i)
            if (!(std::abs(z[i] - n.centers[i]) < n.radii[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          return n.left.contains(z.head(k)) && n.right.contains(z.tail(k));
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          return n.inner.contains(n.to_inner(z));
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          for (const auto& m : n.members)
            if (!m.contains(z)) return false;
          return true;
        } else {
          return n.r(z) < 0.0;
        }
      },
      node_->v);
}

inline double ConvexDomain::gauge(const CPoint& z) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          return std::abs(z[0] - n.center) - n.radius;
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return -detail::halfplane_signed(z[0], n.point, n.normal);
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          return std::max(-detail::halfplane_signed(z[0], n.vertex, n.normal_alpha()),
                          -detail::halfplane_signed(z[0], n.vertex, n.normal_beta()));
        } else if constexpr (std::is_same_v<T, BallNode>) {
          return norm(z - n.center) - n.radius;
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          double g = -kInf;
          for (std::size_t i = 0; i < z.dim(); ++i) g = std::max(g, std::abs(z[i] - n.centers[i]) - n.radii[i]);
          return g;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          return std::max(n.left.gauge(z.head(k)), n.right.gauge(z.tail(k)));
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          const double g = n.inner.gauge(n.to_inner(z));
          return n.similarity > 0.0 ? g * n.similarity : g;
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          double g = -kInf;
          for (const auto& m : n.members) g = std::max(g, m.gauge(z));
          return g;
        } else {
          return n.r(z);
        }
      },
      node_->v);
}

inline bool ConvexDomain::closure_contains(const CPoint& z, double tol) const {
  require_dim(z, dim(), "closure_contains");
  return gauge(z) <= tol;
}

inline CPoint ConvexDomain::gauge_gradient(const CPoint& z) const {
  return std::visit(
      [&](const auto& n) -> CPoint {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          const Complex w = z[0] - n.center;
          return CPoint{std::abs(w) > 0.0 ? w / std::abs(w) : Complex(1.0, 0.0)};
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return CPoint{-n.normal};
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          const double a = -detail::halfplane_signed(z[0], n.vertex, n.normal_alpha());
          const double b = -detail::halfplane_signed(z[0], n.vertex, n.normal_beta());
          return CPoint{a >= b ? -n.normal_alpha() : -n.normal_beta()};
        } else if constexpr (std::is_same_v<T, BallNode>) {
          const CPoint w = z - n.center;
          if (norm(w) == 0.0) {
            CPoint e(z.dim());
            e[0] = 1.0;
            return e;
          }
          return normalized(w);
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          std::size_t best = 0;
          double g = -kInf;
          for (std::size_t i = 0; i < z.dim(); ++i) {
            const double gi = std::abs(z[i] - n.centers[i]) - n.radii[i];
            if (gi > g) {
              g = gi;
              best = i;
            }
          }
          CPoint out(z.dim());
          const Complex w = z[best] - n.centers[best];
          out[best] = std::abs(w) > 0.0 ? w / std::abs(w) : Complex(1.0, 0.0);
          return out;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          const CPoint zl = z.head(k), zr = z.tail(k);
          if (n.left.gauge(zl) >= n.right.gauge(zr)) return CPoint::join(n.left.gauge_gradient(zl), CPoint(zr.dim()));
          return CPoint::join(CPoint(zl.dim()), n.right.gauge_gradient(zr));
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          CPoint g = n.AinvAdj * n.inner.gauge_gradient(n.to_inner(z));
          return n.similarity > 0.0 ? n.similarity * g : g;
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          std::size_t best = 0;
          double g = -kInf;
          for (std::size_t i = 0; i < n.members.size(); ++i) {
            const double gi = n.members[i].gauge(z);
            if (gi > g) {
              g = gi;
              best = i;
            }
          }
          return n.members[best].gauge_gradient(z);
        } else {
          return n.r.gradient(z);
        }
      },
      node_->v);
}

inline double ConvexDomain::ray_exit(const CPoint& z, const CPoint& u) const {
  require_dim(u, dim(), "ray_exit direction");
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          return detail::ball_exit(CPoint{z[0] - n.center}, u, n.radius);
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return detail::halfplane_exit(z[0], u[0], n.point, n.normal);
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          return std::min(detail::halfplane_exit(z[0], u[0], n.vertex, n.normal_alpha()),
                          detail::halfplane_exit(z[0], u[0], n.vertex, n.normal_beta()));
        } else if constexpr (std::is_same_v<T, BallNode>) {
          return detail::ball_exit(z - n.center, u, n.radius);
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          double t = kInf;
          for (std::size_t i = 0; i < z.dim(); ++i)
            t = std::min(t, detail::ball_exit(CPoint{z[i] - n.centers[i]}, CPoint{u[i]}, n.radii[i]));
          return t;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          return std::min(n.left.ray_exit(z.head(k), u.head(k)), n.right.ray_exit(z.tail(k), u.tail(k)));
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          return n.inner.ray_exit(n.to_inner(z), n.Ainv * u);
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          double t = kInf;
          for (const auto& m : n.members) t = std::min(t, m.ray_exit(z, u));
          return t;
        } else {
          if (!(n.r(z) < 0.0)) return 0.0;
          return detail::newton_exit(
              n.r, [&](const CPoint& w) { return n.r.gradient(w); }, z, u);
        }
      },
      node_->v);
}

// ---------------------------------------------------------------------------
// Boundary distances

inline BoundaryPoint ConvexDomain::nearest_boundary(const CPoint& z) const {
  require_inside(z, "nearest_boundary");
  auto generic = [&]() {
    auto hit = detail::nearest_boundary_generic(
        z, [&](const CPoint& a, const CPoint& u) { return ray_exit(a, u); },
        [&](const CPoint& a) { return gauge_gradient(a); });
    return BoundaryPoint{hit.point, hit.normal, hit.distance};
  };
  return std::visit(
      [&](const auto& n) -> BoundaryPoint {
        using T = std::decay_t<decltype(n)>;
        auto on_line = [&](Complex p, Complex nin) {
          const double s = detail::halfplane_signed(z[0], p, nin);
          return BoundaryPoint{CPoint{z[0] - s * nin}, CPoint{-nin}, s};
        };
        if constexpr (std::is_same_v<T, DiskNode>) {
          const Complex w = z[0] - n.center;
          const Complex u = std::abs(w) > 0.0 ? w / std::abs(w) : Complex(1.0, 0.0);
          return BoundaryPoint{CPoint{n.center + n.radius * u}, CPoint{u}, n.radius - std::abs(w)};
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return on_line(n.point, n.normal);
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          BoundaryPoint a = on_line(n.vertex, n.normal_alpha());
          BoundaryPoint b = on_line(n.vertex, n.normal_beta());
          return a.distance <= b.distance ? a : b;
        } else if constexpr (std::is_same_v<T, BallNode>) {
          CPoint u = gauge_gradient(z);
          return BoundaryPoint{n.center + Complex(n.radius, 0.0) * u, u, n.radius - norm(z - n.center)};
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          std::size_t best = 0;
          double dist = kInf;
          for (std::size_t i = 0; i < z.dim(); ++i) {
            const double di = n.radii[i] - std::abs(z[i] - n.centers[i]);
            if (di < dist) {
              dist = di;
              best = i;
            }
          }
          const Complex w = z[best] - n.centers[best];
          const Complex u = std::abs(w) > 0.0 ? w / std::abs(w) : Complex(1.0, 0.0);
          CPoint q = z, nrm(z.dim());
          q[best] = n.centers[best] + n.radii[best] * u;
          nrm[best] = u;
          return BoundaryPoint{q, nrm, dist};
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          const CPoint zl = z.head(k), zr = z.tail(k);
          BoundaryPoint l = n.left.nearest_boundary(zl);
          BoundaryPoint r = n.right.nearest_boundary(zr);
          if (l.distance <= r.distance)
            return BoundaryPoint{CPoint::join(l.point, zr), CPoint::join(l.normal, CPoint(zr.dim())), l.distance};
          return BoundaryPoint{CPoint::join(zl, r.point), CPoint::join(CPoint(zl.dim()), r.normal), r.distance};
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          if (n.similarity <= 0.0) return generic();
          BoundaryPoint in = n.inner.nearest_boundary(n.to_inner(z));
          return BoundaryPoint{n.to_outer(in.point), normalized(n.AinvAdj * in.normal), in.distance * n.similarity};
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          BoundaryPoint best;
          best.distance = kInf;
          for (const auto& m : n.members) {
            BoundaryPoint b = m.nearest_boundary(z);
            if (b.distance < best.distance) best = std::move(b);
          }
          return best;
        } else {
          return generic();
        }
      },
      node_->v);
}

inline double ConvexDomain::delta(const CPoint& z) const {
  require_inside(z, "delta");
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          return n.radius - std::abs(z[0] - n.center);
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return detail::halfplane_signed(z[0], n.point, n.normal);
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          return std::min(detail::halfplane_signed(z[0], n.vertex, n.normal_alpha()),
                          detail::halfplane_signed(z[0], n.vertex, n.normal_beta()));
        } else if constexpr (std::is_same_v<T, BallNode>) {
          return n.radius - norm(z - n.center);
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          double d = kInf;
          for (std::size_t i = 0; i < z.dim(); ++i) d = std::min(d, n.radii[i] - std::abs(z[i] - n.centers[i]));
          return d;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          return std::min(n.left.delta(z.head(k)), n.right.delta(z.tail(k)));
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          double d = kInf;
          for (const auto& m : n.members) d = std::min(d, m.delta(z));
          return d;
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          if (n.similarity > 0.0) return n.similarity * n.inner.delta(n.to_inner(z));
          return nearest_boundary(z).distance;
        } else {
          return nearest_boundary(z).distance;
        }
      },
      node_->v);
}

inline double ConvexDomain::slice_delta(const CPoint& z, const CPoint& w) const {
  require_dim(w, dim(), "slice direction");
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode> || std::is_same_v<T, HalfPlaneNode> ||
                      std::is_same_v<T, SectorNode>) {
          return std::abs(w[0]) == 0.0 ? kInf : delta(z) / std::abs(w[0]);
        } else if constexpr (std::is_same_v<T, BallNode>) {
          const double ww = norm2(w);
          if (ww == 0.0) return kInf;
          const CPoint a = z - n.center;
          const Complex aw = hermitian(a, w);
          const double rho2 = (n.radius * n.radius - norm2(a) + std::norm(aw) / ww) / ww;
          return std::sqrt(std::max(0.0, rho2)) - std::abs(aw) / ww;
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          double d = kInf;
          for (std::size_t i = 0; i < z.dim(); ++i)
            if (std::abs(w[i]) > 0.0) d = std::min(d, (n.radii[i] - std::abs(z[i] - n.centers[i])) / std::abs(w[i]));
          return d;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          return std::min(n.left.slice_delta(z.head(k), w.head(k)), n.right.slice_delta(z.tail(k), w.tail(k)));
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          return n.inner.slice_delta(n.to_inner(z), n.Ainv * w);
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          double d = kInf;
          for (const auto& m : n.members) d = std::min(d, m.slice_delta(z, w));
          return d;
        } else {
          if (is_zero(w)) return kInf;
          return slice(z, w).delta(0.0);
        }
      },
      node_->v);
}

inline double ConvexDomain::delta_dir(const CPoint& z, const CPoint& v) const {
  require_inside(z, "delta_dir");
  require_dim(v, dim(), "delta_dir direction");
  if (is_zero(v)) throw Error("zero-direction", "delta_dir: direction must be nonzero");
  const double s = slice_delta(z, v);
  return std::isfinite(s) ? s * norm(v) : kInf;
}

// ---------------------------------------------------------------------------
// Slices

namespace detail {

/// Image of a planar catalog node under zeta = (z - p) / v.
inline ConvexDomain planar_pullback(const ConvexDomain& D, Complex p, Complex v) {
  if (const auto* n = D.as<DiskNode>()) return ConvexDomain::disk((n->center - p) / v, n->radius / std::abs(v));
  if (const auto* n = D.as<HalfPlaneNode>())
    return ConvexDomain::half_plane((n->point - p) / v, n->normal * std::conj(v) / std::abs(v));
  if (const auto* n = D.as<SectorNode>()) {
    const double a = std::arg(v);
    return ConvexDomain::sector((n->vertex - p) / v, n->alpha - a, n->beta - a);
  }
  throw Error("not-planar-catalog", "planar pullback requires a disk, half-plane or sector");
}

inline void collect_slice_pieces(const ConvexDomain& D, const CPoint& p, const CPoint& v,
                                 std::vector<ConvexDomain>& out, bool& numeric) {
  switch (D.kind()) {
    case DomainKind::Disk:
    case DomainKind::HalfPlane:
    case DomainKind::Sector:
      if (std::abs(v[0]) > 0.0) out.push_back(planar_pullback(D, p[0], v[0]));
      return;
    case DomainKind::Ball: {
      const auto* n = D.as<BallNode>();
      const double ww = norm2(v);
      if (ww == 0.0) return;
      const CPoint a = p - n->center;
      const Complex aw = hermitian(a, v);
      const double rho2 = (n->radius * n->radius - norm2(a) + std::norm(aw) / ww) / ww;
      if (!(rho2 > 0.0)) throw Error("outside-domain", "slice line misses the ball");
      out.push_back(ConvexDomain::disk(-aw / ww, std::sqrt(rho2)));
      return;
    }
    case DomainKind::Polydisk: {
      const auto* n = D.as<PolydiskNode>();
      for (std::size_t i = 0; i < p.dim(); ++i)
        if (std::abs(v[i]) > 0.0)
          out.push_back(ConvexDomain::disk(-(p[i] - n->centers[i]) / v[i], n->radii[i] / std::abs(v[i])));
      return;
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      const std::size_t k = n->left.dim();
      collect_slice_pieces(n->left, p.head(k), v.head(k), out, numeric);
      collect_slice_pieces(n->right, p.tail(k), v.tail(k), out, numeric);
      return;
    }
    case DomainKind::AffineImage: {
      const auto* n = D.as<AffineImageNode>();
      collect_slice_pieces(n->inner, n->to_inner(p), n->Ainv * v, out, numeric);
      return;
    }
    case DomainKind::Intersection:
      for (const auto& m : D.as<IntersectionNode>()->members) collect_slice_pieces(m, p, v, out, numeric);
      return;
    case DomainKind::Graph:
      numeric = true;
      return;
  }
}

}  // namespace detail

inline PlanarSlice ConvexDomain::slice(const CPoint& p, const CPoint& v) const {
  require_inside(p, "slice");
  require_dim(v, dim(), "slice direction");
  if (is_zero(v)) throw Error("zero-direction", "slice: direction must be nonzero");
  std::vector<ConvexDomain> pieces;
  bool numeric = false;
  detail::collect_slice_pieces(*this, p, v, pieces, numeric);
  if (numeric) pieces.clear();
  return PlanarSlice(*this, p, v, std::move(pieces), numeric);
}

inline BoundaryPoint PlanarSlice::nearest_boundary(Complex zeta) const {
  if (!numeric_) {
    BoundaryPoint best;
    best.distance = kInf;
    for (const auto& piece : pieces_) {
      BoundaryPoint b = piece.nearest_boundary(CPoint{zeta});
      if (b.distance < best.distance) best = std::move(b);
    }
    return best;
  }
  if (!contains(zeta)) throw Error("outside-domain", "slice point is not inside the slice");
  const CPoint& v = dir_;
  auto slice_grad = [&](Complex w) { return hermitian(parent_.gauge_gradient(lift(w)), v); };
  std::vector<double> seeds;
  const Complex g0 = slice_grad(zeta);
  if (std::abs(g0) > 0.0) seeds.push_back(std::arg(g0));
  const auto [t, a] = detail::planar_min_exit(
      [&](double ang) { return parent_.ray_exit(lift(zeta), std::polar(1.0, ang) * v); }, seeds);
  BoundaryPoint out;
  out.distance = t;
  out.point = CPoint{zeta + std::polar(t, a)};
  const Complex n = std::isfinite(t) ? slice_grad(out.point[0]) : Complex(0.0, 0.0);
  out.normal = CPoint{std::abs(n) > 0.0 ? n / std::abs(n) : std::polar(1.0, a)};
  return out;
}

inline double PlanarSlice::delta(Complex zeta) const {
  if (!numeric_) {
    double d = kInf;
    for (const auto& piece : pieces_) d = std::min(d, piece.delta(CPoint{zeta}));
    return d;
  }
  return nearest_boundary(zeta).distance;
}

// ---------------------------------------------------------------------------
// Projection and anchors

inline std::optional<CPoint> ConvexDomain::project(const CPoint& z) const {
  require_dim(z, dim(), "project");
  return std::visit(
      [&](const auto& n) -> std::optional<CPoint> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          return CPoint{detail::project_disk(z[0], n.center, n.radius)};
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return CPoint{detail::project_halfplane(z[0], n.point, n.normal)};
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          const Complex w = z[0];
          const bool inA = detail::halfplane_signed(w, n.vertex, n.normal_alpha()) >= 0.0;
          const bool inB = detail::halfplane_signed(w, n.vertex, n.normal_beta()) >= 0.0;
          if (inA && inB) return z;
          Complex best = n.vertex;
          for (double ang : {n.alpha, n.beta}) {
            const Complex e = std::polar(1.0, ang);
            const double t = std::max(0.0, ((w - n.vertex) * std::conj(e)).real());
            const Complex q = n.vertex + t * e;
            if (std::abs(q - w) < std::abs(best - w)) best = q;
          }
          return CPoint{best};
        } else if constexpr (std::is_same_v<T, BallNode>) {
          const CPoint a = z - n.center;
          const double r = norm(a);
          if (r <= n.radius) return z;
          return n.center + Complex(n.radius / r, 0.0) * a;
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          CPoint out = z;
          for (std::size_t i = 0; i < z.dim(); ++i) out[i] = detail::project_disk(z[i], n.centers[i], n.radii[i]);
          return out;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const std::size_t k = n.left.dim();
          auto l = n.left.project(z.head(k));
          auto r = n.right.project(z.tail(k));
          if (!l || !r) return std::nullopt;
          return CPoint::join(*l, *r);
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          if (n.similarity <= 0.0) return std::nullopt;
          auto in = n.inner.project(n.to_inner(z));
          if (!in) return std::nullopt;
          return n.to_outer(*in);
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          // Dykstra's alternating projections.
          const std::size_t m = n.members.size();
          std::vector<CPoint> inc(m, CPoint(z.dim()));
          CPoint x = z;
          for (int it = 0; it < 20000; ++it) {
            double change = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
              const CPoint y0 = x + inc[j];
              auto y = n.members[j].project(y0);
              if (!y) return std::nullopt;
              inc[j] = y0 - *y;
              change = std::max(change, norm(*y - x));
              x = std::move(*y);
            }
            if (change < 1e-14 * (1.0 + norm(x))) break;
          }
          return x;
        } else {
          return std::nullopt;
        }
      },
      node_->v);
}

inline std::optional<CPoint> ConvexDomain::anchor() const {
  return std::visit(
      [&](const auto& n) -> std::optional<CPoint> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiskNode>) {
          return CPoint{n.center};
        } else if constexpr (std::is_same_v<T, HalfPlaneNode>) {
          return CPoint{n.point + n.normal};
        } else if constexpr (std::is_same_v<T, SectorNode>) {
          return CPoint{n.vertex + std::polar(1.0, 0.5 * (n.alpha + n.beta))};
        } else if constexpr (std::is_same_v<T, BallNode>) {
          return n.center;
        } else if constexpr (std::is_same_v<T, PolydiskNode>) {
          return n.centers;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          auto l = n.left.anchor();
          auto r = n.right.anchor();
          if (!l || !r) return std::nullopt;
          return CPoint::join(*l, *r);
        } else if constexpr (std::is_same_v<T, AffineImageNode>) {
          auto a = n.inner.anchor();
          if (!a) return std::nullopt;
          return n.to_outer(*a);
        } else if constexpr (std::is_same_v<T, IntersectionNode>) {
          std::vector<CPoint> cands;
          for (const auto& m : n.members)
            if (auto a = m.anchor()) cands.push_back(*a);
          const std::size_t base = cands.size();
          for (std::size_t i = 0; i < base; ++i)
            for (std::size_t j = i + 1; j < base; ++j) cands.push_back(0.5 * (cands[i] + cands[j]));
          if (base > 0) {
            CPoint c(dim());
            for (std::size_t i = 0; i < base; ++i) c += cands[i];
            c *= Complex(1.0 / static_cast<double>(base), 0.0);
            cands.push_back(c);
            if (auto p = project(c)) {
              for (std::size_t i = 0; i < base; ++i)
                for (double t : {0.5, 0.1, 0.01, 1e-4}) cands.push_back(*p + Complex(t, 0.0) * (cands[i] - *p));
            }
          }
          for (const auto& c : cands)
            if (contains(c)) return c;
          return std::nullopt;
        } else {
          if (n.anchor && contains(*n.anchor)) return n.anchor;
          CPoint zero(dim());
          if (contains(zero)) return zero;
          return std::nullopt;
        }
      },
      node_->v);
}

/// Structural dilation z -> s z (s > 0); catalog nodes stay catalog nodes.
inline ConvexDomain dilate(const ConvexDomain& D, double s) {
  if (!(s > 0.0)) throw Error("bad-scale", "dilation factor must be positive");
  const Complex cs(s, 0.0);
  switch (D.kind()) {
    case DomainKind::Disk: {
      const auto* n = D.as<DiskNode>();
      return ConvexDomain::disk(cs * n->center, s * n->radius);
    }
    case DomainKind::HalfPlane: {
      const auto* n = D.as<HalfPlaneNode>();
      return ConvexDomain::half_plane(cs * n->point, n->normal);
    }
    case DomainKind::Sector: {
      const auto* n = D.as<SectorNode>();
      return ConvexDomain::sector(cs * n->vertex, n->alpha, n->beta);
    }
    case DomainKind::Ball: {
      const auto* n = D.as<BallNode>();
      return ConvexDomain::ball(s * n->center, s * n->radius);
    }
    case DomainKind::Polydisk: {
      const auto* n = D.as<PolydiskNode>();
      std::vector<double> r = n->radii;
      for (double& x : r) x *= s;
      return ConvexDomain::polydisk(s * n->centers, std::move(r));
    }
    case DomainKind::Product: {
      const auto* n = D.as<ProductNode>();
      return ConvexDomain::product(dilate(n->left, s), dilate(n->right, s));
    }
    case DomainKind::AffineImage: {
      const auto* n = D.as<AffineImageNode>();
      CMatrix A = n->A;
      for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t c = 0; c < A.size(); ++c) A(r, c) *= s;
      return ConvexDomain::affine_image(std::move(A), s * n->b, n->inner);
    }
    case DomainKind::Intersection: {
      std::vector<ConvexDomain> m;
      for (const auto& x : D.as<IntersectionNode>()->members) m.push_back(dilate(x, s));
      return ConvexDomain::intersection(std::move(m));
    }
    case DomainKind::Graph:
      break;
  }
  CMatrix A = CMatrix::identity(D.dim());
  for (std::size_t i = 0; i < D.dim(); ++i) A(i, i) = cs;
  return ConvexDomain::affine_image(std::move(A), CPoint(D.dim()), D);
}

}  // namespace kcat0
