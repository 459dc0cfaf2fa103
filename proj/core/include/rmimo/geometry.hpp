#pragma once

#include <vector>

#include "rmimo/large_scale.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/system_config.hpp"

namespace rmimo {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

// Base station positions of a hexagonal deployment.  Cell 0 is the observed
// cell at the origin; for seven cells the other six are its first ring.
struct CellLayout {
  std::vector<Point> bs_positions;
  double cell_radius = 0.0;  // center-to-vertex, meters
};

// Supported cell counts: 1 and 7.  Anything else throws UnsupportedLayout;
// there is no canonical finite hex tiling for other counts.
CellLayout build_hex_layout(int cells, double cell_radius_m);

// Hexagon with vertices at distance `radius` from `center` and edge normals
// at multiples of 60 degrees (flat side facing each ring neighbor).
bool point_in_hexagon(const Point& p, const Point& center, double radius);

// User positions, uniform over each cell's hexagon by rejection sampling.
struct UserDrop {
  std::vector<std::vector<Point>> positions;  // [cell][user]
};

UserDrop drop_users(const CellLayout& layout, int users_per_cell,
                    RandomStream& rng);

// Distance-and-shadowing parameters of the propagation model.
struct GeometryParams {
  double cell_radius_m = 500.0;
  double shadow_std_db = 8.0;       // log-normal shadowing spread
  double pathloss_exponent = 3.8;
  double reference_distance_m = 200.0;  // below this the gain stops growing
};

// Link gain at a given distance: shadow / (1 + (d / d_ref)^alpha).
// Bounded above by the shadowing factor even at zero distance.
double large_scale_gain(double distance_m, double shadow_linear,
                        double pathloss_exponent, double reference_distance_m);

// Every link gets this LOS-to-NLOS ratio.  Sweeps override it per point.
struct ConstantKPolicy {
  double ricean_k = 0.0;  // linear
};

// Draws shadowing and angles for one user drop and assembles the gains.
// Consumes rng in a fixed documented order: first shadowing for all (j, l, n)
// triples j-major, then one angle per (l, n) pair l-major.
LargeScaleRealization realize_large_scale(const SystemConfig& config,
                                          const CellLayout& layout,
                                          const UserDrop& drop,
                                          const GeometryParams& geometry,
                                          const ConstantKPolicy& k_policy,
                                          RandomStream& rng);

}  // namespace rmimo
