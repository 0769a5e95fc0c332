#include "mf/functional.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mf/spectral.hpp"
#include "sum.hpp"

namespace mf {
namespace {

Field negate(const Field& u) { return -1.0 * u; }

}  // namespace

Params::Params(double l1, double l2) : lambda1(l1), lambda2(l2) {
  if (!(std::isfinite(l1) && std::isfinite(l2) && l1 >= 0.0 && l2 >= 0.0)) {
    throw std::invalid_argument("Params: couplings must be finite and >= 0");
  }
}

double eval_G(const Field& u) {
  // log-mean-exp with the max subtracted: bubbles reach amplitudes ~20, and
  // e^20 alone would wash out every digit of the small samples.
  const double m = max_value(u);
  detail::KahanSum sum;
  for (double v : u.values()) sum.add(std::exp(v - m));
  const double h = u.grid().h();
  return m + std::log(sum.value() * h * h);
}

EnergyBreakdown eval_I(const MeanZeroField& u, const Params& p) {
  EnergyBreakdown e;
  e.dirichlet = 0.5 * h1_norm_sq(u);
  e.g_plus = eval_G(u);
  e.g_minus = eval_G(negate(u));
  e.total = e.dirichlet - p.lambda1 * e.g_plus - p.lambda2 * e.g_minus;
  return e;
}

Field normalized_density(const Field& u, int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("normalized_density: sign must be +1 or -1");
  }
  const double s = static_cast<double>(sign);
  double m = sign > 0 ? max_value(u) : -min_value(u);
  std::vector<double> w(u.values().size());
  detail::KahanSum sum;
  const std::vector<double>& uv = u.values();
  for (std::size_t i = 0; i < uv.size(); ++i) {
    w[i] = std::exp(s * uv[i] - m);
    sum.add(w[i]);
  }
  const double h = u.grid().h();
  const double z = sum.value() * h * h;
  for (double& v : w) v /= z;
  return Field(u.grid(), std::move(w), u.smoothness());
}

MeanZeroField residual(const MeanZeroField& u, const Params& p) {
  Field r = minus_laplacian(u);
  const Field rho_plus = normalized_density(u, +1);
  const Field rho_minus = normalized_density(u, -1);
  std::vector<double>& rv = r.values();
  const std::vector<double>& dp = rho_plus.values();
  const std::vector<double>& dm = rho_minus.values();
  for (std::size_t i = 0; i < rv.size(); ++i) {
    rv[i] += -p.lambda1 * (dp[i] - 1.0) + p.lambda2 * (dm[i] - 1.0);
  }
  // The density terms integrate to zero exactly by normalization; the
  // projection mops up the quadrature rounding.
  return MeanZeroField::project(std::move(r));
}

double residual_l2_norm(const MeanZeroField& u, const Params& p) {
  return l2_norm(residual(u, p));
}

MeanZeroField sobolev_gradient(const MeanZeroField& u, const Params& p) {
  return inv_minus_laplacian(residual(u, p));
}

double dual_norm_Gprime(const MeanZeroField& u) {
  Field rho = normalized_density(u, +1);
  const double m = mean(rho);
  for (double& v : rho.values()) v -= m;
  return h1_norm(inv_minus_laplacian(rho));
}

double hess_at_zero_quadform(const MeanZeroField& phi, const Params& p) {
  detail::KahanSum sum;
  for (double v : phi.values()) sum.add(v * v);
  const double h = phi.grid().h();
  return h1_norm_sq(phi) - (p.lambda1 + p.lambda2) * sum.value() * h * h;
}

HessianOperator::HessianOperator(const MeanZeroField& u, const Params& p)
    : p_(p),
      rho_plus_(normalized_density(u, +1)),
      rho_minus_(normalized_density(u, -1)) {}

MeanZeroField HessianOperator::apply(const MeanZeroField& phi) const {
  Field out = minus_laplacian(phi);
  const std::vector<double>& pv = phi.values();
  const std::vector<double>& dp = rho_plus_.values();
  const std::vector<double>& dm = rho_minus_.values();
  const double h = phi.grid().h();

  detail::KahanSum sp, sm;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    sp.add(dp[i] * pv[i]);
    sm.add(dm[i] * pv[i]);
  }
  const double ip = sp.value() * h * h;  // integral of rho_+ * phi
  const double im = sm.value() * h * h;  // integral of rho_- * phi

  std::vector<double>& ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    ov[i] -= p_.lambda1 * (dp[i] * pv[i] - dp[i] * ip);
    ov[i] -= p_.lambda2 * (dm[i] * pv[i] - dm[i] * im);
  }
  return MeanZeroField::project(std::move(out));
}

MeanZeroField apply_hessian(const MeanZeroField& u, const Params& p,
                            const MeanZeroField& phi) {
  return HessianOperator(u, p).apply(phi);
}

}  // namespace mf
