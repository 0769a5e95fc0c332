#include "mf/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mf {

TorusGrid::TorusGrid(int n) : n_(n), h_(1.0 / n) {
  if (n < 16 || n % 2 != 0) {
    throw std::invalid_argument("TorusGrid: n must be even and >= 16, got " +
                                std::to_string(n));
  }
}

double torus_distance(const Point& a, const Point& b) {
  // remainder(d, 1) lands in [-1/2, 1/2], which is exactly the nearest
  // periodic image along each axis.
  const double dx = std::remainder(a.x - b.x, 1.0);
  const double dy = std::remainder(a.y - b.y, 1.0);
  return std::hypot(dx, dy);
}

}  // namespace mf
