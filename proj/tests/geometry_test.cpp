#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmimo/geometry.hpp"
#include "rmimo/system_config.hpp"

using namespace rmimo;

TEST_SUITE("geometry") {

TEST_CASE("hex layout puts the ring at sqrt(3) radii") {
  const CellLayout one = build_hex_layout(1, 500.0);
  CHECK_EQ(one.bs_positions.size(), 1u);
  CHECK_EQ(one.bs_positions[0].x, 0.0);

  const CellLayout seven = build_hex_layout(7, 500.0);
  REQUIRE_EQ(seven.bs_positions.size(), 7u);
  for (int k = 1; k < 7; ++k) {
    const double d = distance(seven.bs_positions[0], seven.bs_positions[k]);
    CHECK_EQ(doctest::Approx(d), 866.0254037844386);
  }
  // Adjacent ring members are also one lattice step apart.
  for (int k = 1; k < 6; ++k) {
    const double d = distance(seven.bs_positions[k], seven.bs_positions[k + 1]);
    CHECK_EQ(doctest::Approx(d), 866.0254037844386);
  }
}

TEST_CASE("only 1- and 7-cell layouts exist") {
  CHECK_THROWS_AS(build_hex_layout(2, 500.0), UnsupportedLayout);
  CHECK_THROWS_AS(build_hex_layout(19, 500.0), UnsupportedLayout);
  CHECK_THROWS_AS(build_hex_layout(7, 0.0), DimensionError);
  CHECK_THROWS_AS(build_hex_layout(7, -1.0), DimensionError);
}

TEST_CASE("hexagon membership matches the apothem geometry") {
  const Point c{10.0, -5.0};
  CHECK(point_in_hexagon(c, c, 1.0));
  // The flat side faces +x at the apothem sqrt(3)/2.
  CHECK(point_in_hexagon({c.x + 0.86, c.y}, c, 1.0));
  CHECK_FALSE(point_in_hexagon({c.x + 0.87, c.y}, c, 1.0));
  // Vertices sit at the full radius along 30 + k*60 degrees.
  const double vx = std::cos(std::numbers::pi / 6.0);
  const double vy = std::sin(std::numbers::pi / 6.0);
  CHECK(point_in_hexagon({c.x + 0.99 * vx, c.y + 0.99 * vy}, c, 1.0));
  CHECK_FALSE(point_in_hexagon({c.x + 1.01 * vx, c.y + 1.01 * vy}, c, 1.0));
}

TEST_CASE("user drops land inside their own hexagon and are reproducible") {
  const CellLayout layout = build_hex_layout(7, 500.0);
  RandomStream rng(5);
  const UserDrop drop = drop_users(layout, 10, rng);
  REQUIRE_EQ(drop.positions.size(), 7u);
  for (std::size_t cell = 0; cell < 7; ++cell) {
    REQUIRE_EQ(drop.positions[cell].size(), 10u);
    for (const Point& p : drop.positions[cell])
      CHECK(point_in_hexagon(p, layout.bs_positions[cell], 500.0));
  }

  RandomStream rng2(5);
  const UserDrop again = drop_users(layout, 10, rng2);
  CHECK_EQ(again.positions[3][7].x, drop.positions[3][7].x);
  CHECK_EQ(again.positions[3][7].y, drop.positions[3][7].y);
}

TEST_CASE("link gain follows the bounded path-loss law") {
  // Doubling the reference distance costs the factor 1/(1 + 2^alpha).
  CHECK_EQ(doctest::Approx(large_scale_gain(400.0, 1.0, 3.8, 200.0)),
           0.06698457989158757);
  // At zero distance the gain is exactly the shadowing factor.
  CHECK_EQ(large_scale_gain(0.0, 2.5, 3.8, 200.0), 2.5);
  // Monotone decay.
  double prev = large_scale_gain(0.0, 1.0, 3.8, 200.0);
  for (double d = 50.0; d < 2000.0; d += 50.0) {
    const double g = large_scale_gain(d, 1.0, 3.8, 200.0);
    CHECK_LT(g, prev);
    prev = g;
  }
}

TEST_CASE("large-scale realization has the documented shape and ranges") {
  const auto config =
      SystemConfig::with_uniform_pilots(7, 4, 16, 4, 100, 1.0, 1.0);
  const CellLayout layout = build_hex_layout(7, 500.0);
  RandomStream rng(21);
  const UserDrop drop = drop_users(layout, 4, rng);
  const GeometryParams geometry;
  const LargeScaleRealization ls = realize_large_scale(
      config, layout, drop, geometry, ConstantKPolicy{2.0}, rng);

  CHECK_EQ(ls.cells(), 7);
  CHECK_EQ(ls.users(), 4);
  CHECK((ls.ricean_k.array() == 2.0).all());
  CHECK(has_shared_ricean_k(ls));
  for (int l = 0; l < 7; ++l) {
    for (int n = 0; n < 4; ++n) {
      CHECK_GE(ls.aoa(l, n), 0.0);
      CHECK_LT(ls.aoa(l, n), 2.0 * std::numbers::pi);
      for (int j = 0; j < 7; ++j) CHECK_GT(ls.beta[j](l, n), 0.0);
    }
  }
}

TEST_CASE("zero shadowing makes the gains a pure function of distance") {
  const auto config =
      SystemConfig::with_uniform_pilots(1, 2, 8, 2, 10, 1.0, 1.0);
  const CellLayout layout = build_hex_layout(1, 500.0);
  RandomStream rng(3);
  const UserDrop drop = drop_users(layout, 2, rng);
  GeometryParams geometry;
  geometry.shadow_std_db = 0.0;
  const LargeScaleRealization ls = realize_large_scale(
      config, layout, drop, geometry, ConstantKPolicy{0.0}, rng);
  for (int n = 0; n < 2; ++n) {
    const double d = distance(drop.positions[0][n], layout.bs_positions[0]);
    CHECK_EQ(doctest::Approx(ls.beta[0](0, n)),
             large_scale_gain(d, 1.0, geometry.pathloss_exponent,
                              geometry.reference_distance_m));
  }
}

TEST_CASE("constant realization fills every link identically") {
  const auto ls = LargeScaleRealization::constant(3, 2, 0.7, 1.5, 0.3);
  CHECK_EQ(ls.cells(), 3);
  CHECK_EQ(ls.users(), 2);
  CHECK_EQ(ls.beta[2](1, 0), 0.7);
  CHECK_EQ(ls.ricean_k(2, 1), 1.5);
  CHECK_EQ(ls.aoa(0, 1), 0.3);

  auto mixed = ls;
  mixed.ricean_k(1, 1) = 9.0;
  CHECK_FALSE(has_shared_ricean_k(mixed));
}

}  // TEST_SUITE
