#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "mf/grid.hpp"

namespace mf {

/// Whether a field is smooth enough for spectral differentiation.
///
/// Fields assembled from radially truncated profiles carry gradient kinks;
/// spectral differentiation of those rings like a bell, so energy evaluation
/// falls back to finite differences for them.
enum class Smoothness { smooth, kinked };

/// A real scalar field sampled on a TorusGrid, stored row-major:
/// values[i*n + j] is the sample at (i*h, j*h).
class Field {
 public:
  explicit Field(TorusGrid grid, double fill = 0.0,
                 Smoothness smoothness = Smoothness::smooth);
  Field(TorusGrid grid, std::vector<double> values,
        Smoothness smoothness = Smoothness::smooth);

  /// Samples f(x, y) at every grid node.
  static Field sample(TorusGrid grid, const std::function<double(double, double)>& f,
                      Smoothness smoothness = Smoothness::smooth);

  const TorusGrid& grid() const noexcept { return grid_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  bool smooth() const noexcept { return smoothness_ == Smoothness::smooth; }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  double operator()(int i, int j) const noexcept {
    return values_[static_cast<std::size_t>(i) * grid_.n() + j];
  }
  double& operator()(int i, int j) noexcept {
    return values_[static_cast<std::size_t>(i) * grid_.n() + j];
  }

  void set_smoothness(Smoothness s) noexcept { smoothness_ = s; }

 private:
  TorusGrid grid_;
  std::vector<double> values_;
  Smoothness smoothness_;
};

/// Combining two fields keeps smoothness only if both operands are smooth.
Smoothness combine(Smoothness a, Smoothness b) noexcept;

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

/// a + s*b without intermediate allocations beyond the result.
Field axpy(const Field& a, double s, const Field& b);

/// Grid quadrature of u over the torus: h^2 * sum of samples
/// (compensated summation; the torus has unit area).
double integrate(const Field& u);

/// Mean value of u; equals integrate(u) because |M| = 1.
double mean(const Field& u);

double max_abs(const Field& u);
double max_value(const Field& u);
double min_value(const Field& u);

/// L^2 norm sqrt(integral of u^2).
double l2_norm(const Field& u);

/// A field whose mean vanishes to within 1e-12 * (1 + max |values|).
///
/// This is the discrete stand-in for the mean-zero Sobolev space the energy
/// lives on; constructing one from a field with a larger mean throws.
class MeanZeroField {
 public:
  explicit MeanZeroField(Field f);

  /// Subtracts the mean, then wraps. Never throws for finite input.
  static MeanZeroField project(Field f);

  const Field& field() const noexcept { return field_; }
  operator const Field&() const noexcept { return field_; }

  const TorusGrid& grid() const noexcept { return field_.grid(); }
  const std::vector<double>& values() const noexcept { return field_.values(); }
  bool smooth() const noexcept { return field_.smooth(); }

 private:
  Field field_;
};

MeanZeroField operator+(const MeanZeroField& a, const MeanZeroField& b);
MeanZeroField operator-(const MeanZeroField& a, const MeanZeroField& b);
MeanZeroField operator*(double s, const MeanZeroField& a);
MeanZeroField axpy(const MeanZeroField& a, double s, const MeanZeroField& b);

/// Plain-text field file: first line n, then n lines of n values each
/// (row i on line i+1), written with 17 significant digits.
void save_field(const std::filesystem::path& path, const Field& u);

/// Reads the format written by save_field. The file does not record
/// smoothness, so the caller chooses the flag (smooth by default).
Field load_field(const std::filesystem::path& path,
                 Smoothness smoothness = Smoothness::smooth);

}  // namespace mf
