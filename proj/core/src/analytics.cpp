#include "rmimo/analytics.hpp"

#include <cmath>
#include <numbers>

namespace rmimo {
namespace {

void check_indices(const SystemConfig& config, const LargeScaleRealization& ls,
                   int cell, int user) {
  if (cell < 0 || cell >= config.cells) throw IndexError("cell out of range");
  if (user < 0 || user >= config.users_per_cell)
    throw IndexError("user out of range");
  if (ls.cells() != config.cells || ls.users() != config.users_per_cell)
    throw DimensionError("large-scale realization does not match config");
}

void check_spacing(const SystemConfig& config) {
  if (config.spacing != 0.5)
    throw SpacingError(
        "closed-form expressions hold at half-wavelength spacing only");
}

}  // namespace

double phi_coupling(int antennas, double theta_a, double theta_b) {
  if (antennas < 1) throw DimensionError("antennas must be >= 1");
  const double d = std::sin(theta_a) - std::sin(theta_b);
  const double half = 0.5 * std::numbers::pi * d;
  const double den = std::sin(half);
  // Dirichlet-kernel ratio; l'Hopital where the denominator vanishes (the
  // sines coincide modulo 2, where the responses align up to sign).
  if (std::abs(den) < 1e-12)
    return std::abs(antennas * std::cos(antennas * half) / std::cos(half));
  return std::abs(std::sin(antennas * half) / den);
}

SinrIngredients ingredients(const SystemConfig& config,
                            const LargeScaleRealization& ls, int cell,
                            int user) {
  check_indices(config, ls, cell, user);

  const int cells = config.cells;
  const int users = config.users_per_cell;
  const int antennas = config.antennas;
  const int j = cell;
  const int n = user;

  SinrIngredients out;
  out.phi.resize(users, users);
  for (int a = 0; a < users; ++a)
    for (int b = 0; b < users; ++b)
      out.phi(a, b) = phi_coupling(antennas, ls.aoa(j, a), ls.aoa(j, b));

  for (int l = 0; l < cells; ++l) {
    const double contribution = config.pilot_powers(l, n) *
                                (ls.ricean_k(l, n) + 1.0) * ls.beta[j](l, n);
    out.zeta += contribution;
    if (l != j) out.psi += contribution * ls.beta[j](l, n);
  }
  out.zeta += 1.0;

  for (int l = 0; l < cells; ++l)
    for (int t = 0; t < users; ++t) out.vartheta += ls.beta[j](l, t);
  out.vartheta += 1.0 / config.uplink_power;

  for (int t = 0; t < users; ++t) {
    const double k_t = ls.ricean_k(j, t);
    const double weight = k_t / (k_t + 1.0);
    const double b_t = ls.beta[j](j, t);
    if (t != n) {
      const double coupling =
          out.phi(n, t) * out.phi(n, t) / antennas * b_t;
      out.varsigma += weight * coupling;
      out.varrho += coupling;
    }
    out.varsigma -= weight * b_t;
    out.varrho -= b_t;
  }

  out.chi = 1.0;
  {
    const double own = config.pilot_powers(j, n) * ls.beta[j](j, n);
    double cross = 0.0;
    for (int l = 0; l < cells; ++l) {
      if (l == j) continue;
      cross += config.pilot_powers(l, n) * (ls.ricean_k(l, n) + 1.0) *
               ls.beta[j](l, n);
    }
    out.chi = own / (own + cross + 1.0);
  }
  return out;
}

double sinr_closed(const SystemConfig& config, const LargeScaleRealization& ls,
                   int cell, int user, EstimatorKind kind) {
  check_spacing(config);
  const SinrIngredients in = ingredients(config, ls, cell, user);

  const int m = config.antennas;
  const double rho = config.pilot_powers(cell, user);
  const double k = ls.ricean_k(cell, user);
  const double beta = ls.beta[cell](cell, user);

  if (kind == EstimatorKind::ls) {
    const double num = m * rho * (k + 1.0) * beta * beta;
    const double den =
        m * in.psi + in.zeta * in.vartheta + rho * k * beta * in.varsigma;
    return num / den;
  }
  const double chi = in.chi;
  const double num = m * rho * (k + chi) * (k + chi) * beta * beta;
  const double den = m * chi * chi * (k + 1.0) * in.psi +
                     rho * (k + chi) * (k + 1.0) * beta * in.vartheta +
                     rho * k * (k + 1.0) * beta * in.varsigma;
  return num / den;
}

double sinr_rayleigh(const SystemConfig& config,
                     const LargeScaleRealization& ls, int cell, int user) {
  check_spacing(config);
  check_indices(config, ls, cell, user);

  const int j = cell;
  const int n = user;
  const double rho = config.pilot_powers(j, n);
  const double beta = ls.beta[j](j, n);

  double psi0 = 0.0;
  double received = 0.0;
  for (int l = 0; l < config.cells; ++l) {
    const double b = ls.beta[j](l, n);
    received += config.pilot_powers(l, n) * b;
    if (l != j) psi0 += config.pilot_powers(l, n) * b * b;
  }
  double vartheta = 1.0 / config.uplink_power;
  for (int l = 0; l < config.cells; ++l)
    for (int t = 0; t < config.users_per_cell; ++t)
      vartheta += ls.beta[j](l, t);

  const int m = config.antennas;
  return m * rho * beta * beta /
         (m * psi0 + (received + 1.0) * vartheta);
}

double sinr_limit_large_m(const SystemConfig& config,
                          const LargeScaleRealization& ls, int cell, int user,
                          EstimatorKind kind) {
  check_spacing(config);
  const SinrIngredients in = ingredients(config, ls, cell, user);
  if (in.psi == 0.0)
    throw UnboundedLimit(
        "no same-pilot contamination: SINR grows linearly in the antenna "
        "count and has no large-array limit");

  const double rho = config.pilot_powers(cell, user);
  const double k = ls.ricean_k(cell, user);
  const double beta = ls.beta[cell](cell, user);
  if (kind == EstimatorKind::ls)
    return rho * (k + 1.0) * beta * beta / in.psi;
  const double chi = in.chi;
  return rho * (k + chi) * (k + chi) * beta * beta /
         (chi * chi * (k + 1.0) * in.psi);
}

double sinr_limit_large_k(const SystemConfig& config,
                          const LargeScaleRealization& ls, int cell, int user,
                          EstimatorKind kind) {
  check_spacing(config);
  check_indices(config, ls, cell, user);
  if (!has_shared_ricean_k(ls))
    throw Error(
        "the strong-LOS limit assumes one shared Ricean factor; this "
        "realization mixes different values");

  const int j = cell;
  const int n = user;
  const int users = config.users_per_cell;
  const int m = config.antennas;
  const double rho = config.pilot_powers(j, n);
  const double beta = ls.beta[j](j, n);

  // Angle couplings against the tagged user.
  std::vector<double> phi2_over_m(users);
  for (int t = 0; t < users; ++t) {
    const double phi = phi_coupling(m, ls.aoa(j, n), ls.aoa(j, t));
    phi2_over_m[t] = phi * phi / m;
  }

  if (kind == EstimatorKind::ls) {
    double psi0 = 0.0;
    double received = 0.0;
    for (int l = 0; l < config.cells; ++l) {
      const double b = ls.beta[j](l, n);
      received += config.pilot_powers(l, n) * b;
      if (l != j) psi0 += config.pilot_powers(l, n) * b * b;
    }
    double vartheta = 1.0 / config.uplink_power;
    for (int l = 0; l < config.cells; ++l)
      for (int t = 0; t < users; ++t) vartheta += ls.beta[j](l, t);
    double varrho = 0.0;
    for (int t = 0; t < users; ++t) {
      if (t != n) varrho += phi2_over_m[t] * ls.beta[j](j, t);
      varrho -= ls.beta[j](j, t);
    }
    return m * rho * beta * beta /
           (m * psi0 + received * vartheta + rho * beta * varrho);
  }

  // Strong-LOS MMSE limit: only cross-cell gains, data noise, and the
  // residual LOS coupling survive the shrinkage.
  double den = 1.0 / config.uplink_power;
  for (int l = 0; l < config.cells; ++l) {
    if (l == j) continue;
    for (int t = 0; t < users; ++t) den += ls.beta[j](l, t);
  }
  for (int t = 0; t < users; ++t)
    if (t != n) den += phi2_over_m[t] * ls.beta[j](j, t);
  return m * beta / den;
}

double spectral_efficiency(double sinr, int coherence_symbols,
                           int pilot_symbols) {
  if (coherence_symbols < 1 || pilot_symbols < 1)
    throw DimensionError("symbol counts must be >= 1");
  if (pilot_symbols > coherence_symbols)
    throw DimensionError("pilot_symbols must not exceed coherence_symbols");
  if (sinr < 0) throw PowerError("sinr must be >= 0");
  const double prelog =
      static_cast<double>(coherence_symbols - pilot_symbols) /
      coherence_symbols;
  return prelog * std::log2(1.0 + sinr);
}

double sum_spectral_efficiency(std::span<const double> per_user_se) {
  double total = 0.0;
  for (double se : per_user_se) total += se;
  return total;
}

}  // namespace rmimo
