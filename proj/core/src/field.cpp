#include "mf/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "sum.hpp"

namespace mf {
namespace {

void require_finite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Field: values must be finite");
    }
  }
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid() != b.grid()) {
    throw std::invalid_argument("Field: operands live on different grids");
  }
}

}  // namespace

Field::Field(TorusGrid grid, double fill, Smoothness smoothness)
    : grid_(grid), values_(grid.size(), fill), smoothness_(smoothness) {
  if (!std::isfinite(fill)) {
    throw std::invalid_argument("Field: fill value must be finite");
  }
}

Field::Field(TorusGrid grid, std::vector<double> values, Smoothness smoothness)
    : grid_(grid), values_(std::move(values)), smoothness_(smoothness) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("Field: value count does not match grid");
  }
  require_finite(values_);
}

Field Field::sample(TorusGrid grid, const std::function<double(double, double)>& f,
                    Smoothness smoothness) {
  std::vector<double> values(grid.size());
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double x = grid.coord(i);
    for (int j = 0; j < n; ++j) {
      values[static_cast<std::size_t>(i) * n + j] = f(x, grid.coord(j));
    }
  }
  return Field(grid, std::move(values), smoothness);
}

Smoothness combine(Smoothness a, Smoothness b) noexcept {
  return (a == Smoothness::smooth && b == Smoothness::smooth)
             ? Smoothness::smooth
             : Smoothness::kinked;
}

Field operator+(const Field& a, const Field& b) { return axpy(a, 1.0, b); }

Field operator-(const Field& a, const Field& b) { return axpy(a, -1.0, b); }

Field operator*(double s, const Field& a) {
  std::vector<double> values(a.values());
  for (double& v : values) v *= s;
  return Field(a.grid(), std::move(values), a.smoothness());
}

Field axpy(const Field& a, double s, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> values(a.values());
  const std::vector<double>& bv = b.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += s * bv[i];
  return Field(a.grid(), std::move(values), combine(a.smoothness(), b.smoothness()));
}

double integrate(const Field& u) {
  detail::KahanSum sum;
  for (double v : u.values()) sum.add(v);
  const double h = u.grid().h();
  return sum.value() * h * h;
}

double mean(const Field& u) { return integrate(u); }

double max_abs(const Field& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_value(const Field& u) {
  double m = u.values().front();
  for (double v : u.values()) m = std::max(m, v);
  return m;
}

double min_value(const Field& u) {
  double m = u.values().front();
  for (double v : u.values()) m = std::min(m, v);
  return m;
}

double l2_norm(const Field& u) {
  detail::KahanSum sum;
  for (double v : u.values()) sum.add(v * v);
  const double h = u.grid().h();
  return std::sqrt(sum.value() * h * h);
}

MeanZeroField::MeanZeroField(Field f) : field_(std::move(f)) {
  const double m = mean(field_);
  const double tol = 1e-12 * (1.0 + max_abs(field_));
  if (std::abs(m) > tol) {
    throw std::invalid_argument("MeanZeroField: |mean| = " + std::to_string(std::abs(m)) +
                                " exceeds tolerance " + std::to_string(tol));
  }
}

MeanZeroField MeanZeroField::project(Field f) {
  const double m = mean(f);
  for (double& v : f.values()) v -= m;
  return MeanZeroField(std::move(f));
}

MeanZeroField operator+(const MeanZeroField& a, const MeanZeroField& b) {
  return axpy(a, 1.0, b);
}

MeanZeroField operator-(const MeanZeroField& a, const MeanZeroField& b) {
  return axpy(a, -1.0, b);
}

MeanZeroField operator*(double s, const MeanZeroField& a) {
  return MeanZeroField(s * a.field());
}

MeanZeroField axpy(const MeanZeroField& a, double s, const MeanZeroField& b) {
  return MeanZeroField(axpy(a.field(), s, b.field()));
}

void save_field(const std::filesystem::path& path, const Field& u) {
  std::ostringstream out;
  const int n = u.grid().n();
  out << n << '\n';
  char buf[40];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", u(i, j));
      if (j > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("save_field: cannot open " + path.string());
  }
  file << out.str();
  if (!file) {
    throw std::runtime_error("save_field: write failed for " + path.string());
  }
}

Field load_field(const std::filesystem::path& path, Smoothness smoothness) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("load_field: cannot open " + path.string());
  }
  int n = 0;
  if (!(file >> n)) {
    throw std::runtime_error("load_field: missing grid size in " + path.string());
  }
  TorusGrid grid(n);
  std::vector<double> values(grid.size());
  for (double& v : values) {
    if (!(file >> v)) {
      throw std::runtime_error("load_field: truncated data in " + path.string());
    }
  }
  return Field(grid, std::move(values), smoothness);
}

}  // namespace mf
