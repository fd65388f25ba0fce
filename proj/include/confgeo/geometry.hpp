#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "confgeo/vec.hpp"

namespace confgeo {

/// Open ball in R^d.
struct Ball {
  Vec center;
  double radius = 1.0;

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const Vec& x) const { return dist(x, center) < radius; }
};

inline double ground_distance(const Vec& x, const Vec& y) {
  check_same_dim(x, y);
  return dist(x, y);
}

/// Distance of x to the sphere bounding b, i.e. |radius - |x - center||.
inline double distance_to_boundary(const Vec& x, const Ball& b) {
  return std::fabs(b.radius - dist(x, b.center));
}

/// Nearest point of the bounding sphere; for x at the center an axis-aligned
/// point is chosen so the result is deterministic.
inline Vec nearest_boundary_point(const Vec& x, const Ball& b) {
  const double r = dist(x, b.center);
  if (r == 0.0) {
    Vec p = b.center;
    p[0] += b.radius;
    return p;
  }
  Vec p = b.center;
  axpy(p, b.radius / r, sub(x, b.center));
  return p;
}

/// Unit lattice cube Q_r = prod_i [r_i - 1/2, r_i + 1/2).
struct LatticeCube {
  std::vector<std::int64_t> index;

  static LatticeCube containing(const Vec& x) {
    LatticeCube q;
    q.index.reserve(x.size());
    for (double c : x) q.index.push_back(static_cast<std::int64_t>(std::floor(c + 0.5)));
    return q;
  }

  bool contains(const Vec& x) const {
    if (x.size() != index.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lo = static_cast<double>(index[i]) - 0.5;
      if (x[i] < lo || x[i] >= lo + 1.0) return false;
    }
    return true;
  }

  std::int64_t sup_norm() const {
    std::int64_t m = 0;
    for (auto r : index) m = std::max(m, r < 0 ? -r : r);
    return m;
  }

  auto operator<=>(const LatticeCube&) const = default;
};

/// Chebyshev distance between cube indices.
inline std::int64_t cube_distance(const LatticeCube& a, const LatticeCube& b) {
  if (a.index.size() != b.index.size()) throw std::invalid_argument("confgeo: cube dimension mismatch");
  std::int64_t m = 0;
  for (std::size_t i = 0; i < a.index.size(); ++i) {
    const std::int64_t d = a.index[i] - b.index[i];
    m = std::max(m, d < 0 ? -d : d);
  }
  return m;
}

/// A membership-testable subset of R^d: an open ball, a closed axis box, or
/// the complement of one of these.
class Region {
 public:
  static Region ball(Ball b) {
    Region r;
    r.kind_ = Kind::ball;
    r.dim_ = b.dim();
    r.ball_ = std::move(b);
    return r;
  }

  static Region box(Vec lo, Vec hi) {
    check_same_dim(lo, hi);
    Region r;
    r.kind_ = Kind::box;
    r.dim_ = static_cast<int>(lo.size());
    r.lo_ = std::move(lo);
    r.hi_ = std::move(hi);
    return r;
  }

  /// Lambda_N = [-w, w]^d.
  static Region centered_box(int dim, double half_width) {
    return box(Vec(static_cast<std::size_t>(dim), -half_width),
               Vec(static_cast<std::size_t>(dim), half_width));
  }

  static Region whole_space(int dim) {
    // complement of an empty box
    Region r = box(Vec(static_cast<std::size_t>(dim), 1.0), Vec(static_cast<std::size_t>(dim), -1.0));
    r.complemented_ = true;
    return r;
  }

  Region complement() const {
    Region r = *this;
    r.complemented_ = !r.complemented_;
    return r;
  }

  bool contains(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("confgeo: region dimension mismatch");
    bool in = false;
    if (kind_ == Kind::ball) {
      in = ball_.contains(x);
    } else {
      in = true;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < lo_[i] || x[i] > hi_[i]) {
          in = false;
          break;
        }
    }
    return complemented_ ? !in : in;
  }

  int dim() const { return dim_; }
  bool is_box() const { return kind_ == Kind::box && !complemented_; }
  bool is_complemented() const { return complemented_; }

  const Vec& box_lo() const {
    require_box();
    return lo_;
  }
  const Vec& box_hi() const {
    require_box();
    return hi_;
  }

  double box_volume() const {
    require_box();
    double v = 1.0;
    for (std::size_t i = 0; i < lo_.size(); ++i) v *= std::max(0.0, hi_[i] - lo_[i]);
    return v;
  }

 private:
  void require_box() const {
    if (!is_box()) throw std::invalid_argument("confgeo: region is not a plain axis box");
  }

  enum class Kind { ball, box };
  Kind kind_ = Kind::box;
  bool complemented_ = false;
  Ball ball_{};
  Vec lo_, hi_;
  int dim_ = 0;
};

}  // namespace confgeo
