#pragma once

#include <span>

#include <Eigen/Core>

#include "rmimo/estimation.hpp"
#include "rmimo/large_scale.hpp"
#include "rmimo/system_config.hpp"

namespace rmimo {

// Angle-coupling coefficient between two uniform-linear-array responses at
// half-wavelength spacing: |sum_m exp(i*pi*m*(sin a - sin b))|, the magnitude
// of the inner product of two unit-gain steering vectors.  Bounded by the
// antenna count, with equality when the sines coincide.
double phi_coupling(int antennas, double theta_a, double theta_b);

// The scalar statistics the effective-SINR expressions are built from, for
// one (cell, user) pair.  Conventions:
//   psi       sum over other cells of pilot_power * (K+1) * beta^2
//             (contamination seen through the same pilot),
//   zeta      sum over all cells of pilot_power * (K+1) * beta, plus 1,
//   vartheta  total received gain at the array plus 1/uplink_power,
//   varsigma  LOS-alignment correction: sum_{t != n} (K_t/(K_t+1)) *
//             (phi_nt^2 / M) * beta_t minus sum_t (K_t/(K_t+1)) * beta_t,
//   varrho    same with the Ricean weights dropped,
//   chi       the MMSE shrinkage factor.
// varsigma and varrho are non-positive whenever every phi_nt^2 <= M, i.e.
// unless some other user's LOS is nearly collinear with user n's.
struct SinrIngredients {
  double psi = 0.0;
  double zeta = 0.0;
  double vartheta = 0.0;
  double varsigma = 0.0;
  double varrho = 0.0;
  double chi = 1.0;
  Eigen::MatrixXd phi;  // users x users coupling matrix for the cell's angles
};

SinrIngredients ingredients(const SystemConfig& config,
                            const LargeScaleRealization& ls, int cell,
                            int user);

// Effective post-detection SINR of one user under matched-filter combining,
// exact for any antenna count.  Requires half-wavelength spacing
// (SpacingError otherwise).
double sinr_closed(const SystemConfig& config, const LargeScaleRealization& ls,
                   int cell, int user, EstimatorKind kind);

// The same quantity when no link has a LOS component.  Both estimators
// coincide there; sinr_closed reduces to this identically at K = 0.
double sinr_rayleigh(const SystemConfig& config,
                     const LargeScaleRealization& ls, int cell, int user);

// Limit of sinr_closed as the antenna count grows.  Throws UnboundedLimit
// when there is no same-pilot contamination (psi = 0), in which case the
// SINR grows linearly in M instead of saturating.
double sinr_limit_large_m(const SystemConfig& config,
                          const LargeScaleRealization& ls, int cell, int user,
                          EstimatorKind kind);

// Limit of sinr_closed as the shared Ricean factor grows.  Precondition:
// every link has the same Ricean factor; throws Error otherwise.  The limit
// itself does not depend on that shared value.
double sinr_limit_large_k(const SystemConfig& config,
                          const LargeScaleRealization& ls, int cell, int user,
                          EstimatorKind kind);

// Ergodic spectral efficiency: the training share of the block is spent,
// what remains carries log2(1 + sinr).
double spectral_efficiency(double sinr, int coherence_symbols,
                           int pilot_symbols);

double sum_spectral_efficiency(std::span<const double> per_user_se);

}  // namespace rmimo
