#pragma once

#include "mf/field.hpp"
#include "mf/grid.hpp"

namespace mf {

/// -Laplacian of u via the Fourier multiplier 4*pi^2*(k^2 + l^2).
/// The result is spectrally smooth and has zero mean by construction.
Field minus_laplacian(const Field& u);

/// Solves -Laplacian(w) = f for the mean-zero w (the zero mode of f is
/// dropped; f must itself be mean-zero to within the MeanZeroField gate).
MeanZeroField inv_minus_laplacian(const Field& f);

/// Spectral (-Lap)^{-1/2}: mode (k,l) divided by sqrt(4*pi^2*(k^2+l^2)),
/// zero mode dropped. Symmetric preconditioner for the Newton-Krylov phase.
Field inv_sqrt_minus_laplacian(const Field& f);

/// Dirichlet energy: integral of |grad u|^2.
///
/// Smooth fields use the Parseval sum over Fourier modes; kinked fields use
/// centered second-order differences with periodic wraparound, which stays
/// O(h^2)-accurate across gradient discontinuities.
double h1_norm_sq(const Field& u);
double h1_norm(const Field& u);

/// Smallest nonzero eigenvalue of -Laplacian on the torus, computed by
/// scanning the discrete multiplier table (equals 4*pi^2 exactly).
double first_eigenvalue(const TorusGrid& grid);

/// Whether mu1 * |M| lies strictly inside the window (8*pi, 16*pi) that the
/// blow-up taxonomy cares about.
struct EigenvalueCheck {
  double mu1 = 0.0;
  double lower = 0.0;   // 8*pi
  double upper = 0.0;   // 16*pi
  bool in_window = false;
};

EigenvalueCheck eigenvalue_window(const TorusGrid& grid);

}  // namespace mf
