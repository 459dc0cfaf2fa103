#include "rmimo/geometry.hpp"

#include <cmath>
#include <numbers>

#include "rmimo/units.hpp"

namespace rmimo {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

CellLayout build_hex_layout(int cells, double cell_radius_m) {
  if (!(cell_radius_m > 0) || !std::isfinite(cell_radius_m))
    throw DimensionError("cell radius must be positive and finite");
  if (cells != 1 && cells != 7)
    throw UnsupportedLayout("supported cell counts are 1 and 7, got " +
                            std::to_string(cells));

  CellLayout layout;
  layout.cell_radius = cell_radius_m;
  layout.bs_positions.push_back({0.0, 0.0});
  if (cells == 7) {
    // First ring: centers at distance sqrt(3) * radius, one per edge.
    const double ring = std::numbers::sqrt3 * cell_radius_m;
    for (int k = 0; k < 6; ++k) {
      const double angle = k * std::numbers::pi / 3.0;
      layout.bs_positions.push_back(
          {ring * std::cos(angle), ring * std::sin(angle)});
    }
  }
  return layout;
}

bool point_in_hexagon(const Point& p, const Point& center, double radius) {
  // Edge normals at 0, 60, 120 degrees; each covers the opposite edge too.
  const double apothem = 0.5 * std::numbers::sqrt3 * radius;
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  for (int k = 0; k < 3; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    const double proj = dx * std::cos(angle) + dy * std::sin(angle);
    if (std::abs(proj) > apothem) return false;
  }
  return true;
}

UserDrop drop_users(const CellLayout& layout, int users_per_cell,
                    RandomStream& rng) {
  if (users_per_cell < 1)
    throw DimensionError("users_per_cell must be >= 1");

  const double r = layout.cell_radius;
  UserDrop drop;
  drop.positions.resize(layout.bs_positions.size());
  for (std::size_t cell = 0; cell < layout.bs_positions.size(); ++cell) {
    const Point& center = layout.bs_positions[cell];
    auto& users = drop.positions[cell];
    users.reserve(users_per_cell);
    for (int n = 0; n < users_per_cell; ++n) {
      // Rejection sampling from the bounding box; acceptance ~ 0.65.
      Point p;
      do {
        p = {center.x + rng.uniform(-r, r), center.y + rng.uniform(-r, r)};
      } while (!point_in_hexagon(p, center, r));
      users.push_back(p);
    }
  }
  return drop;
}

double large_scale_gain(double distance_m, double shadow_linear,
                        double pathloss_exponent,
                        double reference_distance_m) {
  return shadow_linear /
         (1.0 + std::pow(distance_m / reference_distance_m, pathloss_exponent));
}

LargeScaleRealization realize_large_scale(const SystemConfig& config,
                                          const CellLayout& layout,
                                          const UserDrop& drop,
                                          const GeometryParams& geometry,
                                          const ConstantKPolicy& k_policy,
                                          RandomStream& rng) {
  const int cells = config.cells;
  const int users = config.users_per_cell;
  if (static_cast<int>(layout.bs_positions.size()) != cells ||
      static_cast<int>(drop.positions.size()) != cells)
    throw DimensionError("layout/drop cell count does not match config");
  if (k_policy.ricean_k < 0)
    throw PowerError("ricean_k must be >= 0");

  LargeScaleRealization ls;
  ls.beta.assign(cells, Eigen::MatrixXd(cells, users));
  for (int j = 0; j < cells; ++j) {
    for (int l = 0; l < cells; ++l) {
      for (int n = 0; n < users; ++n) {
        const double d = distance(drop.positions[l][n], layout.bs_positions[j]);
        // Log-normal shadowing: 10^(xi * z / 10) with z standard normal.
        const double shadow = db_to_linear(geometry.shadow_std_db * rng.normal());
        ls.beta[j](l, n) = large_scale_gain(d, shadow, geometry.pathloss_exponent,
                                            geometry.reference_distance_m);
      }
    }
  }
  ls.ricean_k = Eigen::MatrixXd::Constant(cells, users, k_policy.ricean_k);
  ls.aoa = Eigen::MatrixXd(cells, users);
  for (int l = 0; l < cells; ++l)
    for (int n = 0; n < users; ++n)
      ls.aoa(l, n) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return ls;
}

LargeScaleRealization LargeScaleRealization::constant(int cells, int users,
                                                      double beta_value,
                                                      double ricean_k_value,
                                                      double aoa_value) {
  LargeScaleRealization ls;
  ls.beta.assign(cells, Eigen::MatrixXd::Constant(cells, users, beta_value));
  ls.ricean_k = Eigen::MatrixXd::Constant(cells, users, ricean_k_value);
  ls.aoa = Eigen::MatrixXd::Constant(cells, users, aoa_value);
  return ls;
}

bool has_shared_ricean_k(const LargeScaleRealization& ls) {
  if (ls.ricean_k.size() == 0) return true;
  const double k0 = ls.ricean_k(0, 0);
  return (ls.ricean_k.array() == k0).all();
}

}  // namespace rmimo
