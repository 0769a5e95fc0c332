#pragma once

#include <cstddef>

namespace mf {

/// A point on the unit flat torus [0,1)^2 with opposite edges identified.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Geodesic distance on the torus (minimum over periodic images).
double torus_distance(const Point& a, const Point& b);

/// Uniform n-by-n sampling of the unit torus.
///
/// Grid nodes sit at (i*h, j*h) for 0 <= i,j < n with spacing h = 1/n.
/// n must be even (so the Nyquist row is unambiguous) and at least 16.
class TorusGrid {
 public:
  explicit TorusGrid(int n);

  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  /// Coordinate of node index i (same along either axis).
  double coord(int i) const noexcept { return i * h_; }

  /// Location of node (i, j).
  Point node(int i, int j) const noexcept { return {coord(i), coord(j)}; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
    return a.n_ == b.n_;
  }
  friend bool operator!=(const TorusGrid& a, const TorusGrid& b) noexcept {
    return !(a == b);
  }

 private:
  int n_;
  double h_;
};

}  // namespace mf
