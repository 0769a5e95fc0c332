#pragma once

#include "mf/field.hpp"

namespace mf {

/// Coupling constants of the mean field energy. Both must be finite and
/// nonnegative (zero is allowed for limiting checks).
struct Params {
  Params(double l1, double l2);

  double lambda1;
  double lambda2;
};

/// I(u) = dirichlet - lambda1 * g_plus - lambda2 * g_minus.
struct EnergyBreakdown {
  double dirichlet = 0.0;  // (1/2) * integral of |grad u|^2
  double g_plus = 0.0;     // G(u)
  double g_minus = 0.0;    // G(-u)
  double total = 0.0;
};

/// G(u) = ln(integral of e^u), stabilized by subtracting max(u) before
/// exponentiating. Nonnegative for mean-zero u by Jensen.
double eval_G(const Field& u);

/// Full energy evaluation; the breakdown satisfies
/// total = dirichlet - lambda1*g_plus - lambda2*g_minus to 1e-12 relative.
EnergyBreakdown eval_I(const MeanZeroField& u, const Params& p);

/// Normalized density e^{s*u} / integral(e^{s*u}), computed stably.
/// sign must be +1 or -1. The result integrates to 1.
Field normalized_density(const Field& u, int sign);

/// L^2 gradient of I: R(u) = -Lap(u) - lambda1*(rho_plus - 1)
///                                   + lambda2*(rho_minus - 1),
/// where rho_± are the normalized densities of ±u. Mean-zero by construction,
/// and d/dt I(u + t*phi) at t=0 equals integrate(R(u)*phi) for mean-zero phi.
MeanZeroField residual(const MeanZeroField& u, const Params& p);

/// Convenience: L^2 norm of residual(u, p).
double residual_l2_norm(const MeanZeroField& u, const Params& p);

/// Riesz representative of I'(u) in the mean-zero Sobolev space:
/// inv_minus_laplacian(residual(u, p)). Its h1_norm is the dual norm of I'.
MeanZeroField sobolev_gradient(const MeanZeroField& u, const Params& p);

/// Dual Sobolev norm of G'(u): h1_norm of the Riesz solve of the mean-zero
/// part of e^u / integral(e^u).
double dual_norm_Gprime(const MeanZeroField& u);

/// Quadratic form of the second variation at u = 0:
/// h1_norm_sq(phi) - (lambda1 + lambda2) * integrate(phi^2).
double hess_at_zero_quadform(const MeanZeroField& phi, const Params& p);

/// Derivative of residual at u applied to phi (matrix-free Hessian action):
///   J(u)phi = -Lap(phi) - lambda1*Cov_+(phi) - lambda2*Cov_-(phi)
/// where Cov_s(phi) = rho_s*phi - rho_s * integral(rho_s*phi) is the
/// (positive-semidefinite) covariance operator of the density rho_s. J is
/// symmetric on mean-zero fields and mean-zero valued; the Newton phase of
/// refine_critical applies it through a Krylov solver.
MeanZeroField apply_hessian(const MeanZeroField& u, const Params& p,
                            const MeanZeroField& phi);

/// Same operator with the densities of u precomputed once, for callers that
/// apply J(u) many times (Krylov iterations).
class HessianOperator {
 public:
  HessianOperator(const MeanZeroField& u, const Params& p);

  MeanZeroField apply(const MeanZeroField& phi) const;

 private:
  Params p_;
  Field rho_plus_;
  Field rho_minus_;
};

}  // namespace mf
