#pragma once

#include <vector>

#include <Eigen/Core>

#include "rmimo/errors.hpp"

namespace rmimo {

// One draw of everything that stays fixed over a coherence block sweep:
// link gains, Ricean factors, and LOS angles of arrival.  Plain data; the
// simulation and the closed forms both read it, neither mutates it.
struct LargeScaleRealization {
  // beta[j](l, n): gain of the link from user n of cell l to base station j.
  std::vector<Eigen::MatrixXd> beta;

  // ricean_k(l, n): LOS-to-NLOS power ratio of user n of cell l, linear.
  Eigen::MatrixXd ricean_k;

  // aoa(l, n): angle of arrival of the LOS path at the serving array,
  // radians in [0, 2*pi).
  Eigen::MatrixXd aoa;

  int cells() const { return static_cast<int>(beta.size()); }
  int users() const { return beta.empty() ? 0 : static_cast<int>(beta.front().cols()); }

  // All links share one gain, Ricean factor, and angle.  Handy in tests.
  static LargeScaleRealization constant(int cells, int users, double beta_value,
                                        double ricean_k_value, double aoa_value);
};

// True when every link has the same Ricean factor (the shared-K hypothesis
// the large-K limits require).
bool has_shared_ricean_k(const LargeScaleRealization& ls);

}  // namespace rmimo
