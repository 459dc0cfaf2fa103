#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "rmimo/channel.hpp"

using namespace rmimo;

namespace {

LargeScaleRealization two_cell_links() {
  auto ls = LargeScaleRealization::constant(2, 2, 1.0, 0.0, 0.0);
  ls.beta[0] << 1.0, 0.8, 0.3, 0.2;  // (l, n): own cell strong, cross weak
  ls.beta[1] << 0.3, 0.2, 1.0, 0.8;
  ls.ricean_k << 2.0, 0.5, 1.0, 0.0;
  ls.aoa << 0.4, 1.3, 2.2, 5.0;
  return ls;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("steering vector carries the requested power at linear phase") {
  const auto v = los_steering(8, 2.25, 0.7, 0.5);
  REQUIRE_EQ(v.size(), 8);
  CHECK_EQ(doctest::Approx(v.squaredNorm()), 8 * 2.25);
  CHECK_EQ(doctest::Approx(v(0).real()), 1.5);
  CHECK_EQ(doctest::Approx(v(0).imag()), 0.0);
  const double step = -std::numbers::pi * std::sin(0.7);
  for (int m = 0; m < 8; ++m) {
    CHECK_EQ(doctest::Approx(std::abs(v(m))), 1.5);
    CHECK_EQ(doctest::Approx(std::arg(v(m) * std::polar(1.0, -step * m))), 0.0);
  }
  CHECK_THROWS_AS(los_steering(0, 1.0, 0.0, 0.5), DimensionError);
}

TEST_CASE("pilot columns are orthonormal and need enough symbols") {
  const auto pilots = pilot_matrix(10, 10);
  const Eigen::MatrixXcd gram = pilots.adjoint() * pilots;
  CHECK_LT((gram - Eigen::MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff(),
           1e-12);
  for (int s = 0; s < 10; ++s)
    CHECK_EQ(doctest::Approx(std::abs(pilots(s, 3))), 1.0 / std::sqrt(10.0));

  const auto tall = pilot_matrix(16, 4);
  CHECK_LT((tall.adjoint() * tall - Eigen::MatrixXcd::Identity(4, 4))
               .cwiseAbs()
               .maxCoeff(),
           1e-12);

  CHECK_THROWS_AS(pilot_matrix(3, 4), DimensionError);
  CHECK_THROWS_AS(pilot_matrix(0, 1), DimensionError);
}

TEST_CASE("channel draw mixes LOS and scatter by the Ricean weights") {
  const auto config =
      SystemConfig::with_uniform_pilots(2, 2, 16, 2, 20, 1.0, 1.0);
  const auto ls = two_cell_links();
  RandomStream rng(17);
  const ChannelRealization ch = draw_channel(config, ls, 0, rng);

  REQUIRE_EQ(ch.h.size(), 2u);
  CHECK_EQ(ch.h[0].rows(), 16);
  CHECK_EQ(ch.h[0].cols(), 2);

  // Other-cell users have no LOS ray: composite equals the scatter part.
  CHECK_EQ((ch.h[1] - ch.nlos[1]).cwiseAbs().maxCoeff(), 0.0);

  // Own-cell users are the documented convex-power mix.
  for (int n = 0; n < 2; ++n) {
    const double k = ls.ricean_k(0, n);
    const Eigen::VectorXcd expect =
        std::sqrt(k / (k + 1.0)) * ch.los.col(n) +
        std::sqrt(1.0 / (k + 1.0)) * ch.nlos[0].col(n);
    CHECK_LT((ch.h[0].col(n) - expect).cwiseAbs().maxCoeff(), 1e-15);
  }

  // The LOS ray is the steering vector at the stored angle and gain.
  const Eigen::VectorXcd ray =
      los_steering(16, ls.beta[0](0, 1), ls.aoa(0, 1), config.spacing);
  CHECK_LT((ch.los.col(1) - ray).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_CASE("scatter power averages to the link gain") {
  const auto config =
      SystemConfig::with_uniform_pilots(2, 2, 8, 2, 20, 1.0, 1.0);
  const auto ls = two_cell_links();
  RandomStream rng(23);
  double power = 0.0;
  const int n_draws = 4000;
  for (int i = 0; i < n_draws; ++i) {
    const ChannelRealization ch = draw_channel(config, ls, 0, rng);
    power += ch.nlos[1].col(0).squaredNorm();
  }
  // Mean of 8 * n_draws unit-normalized entries scaled by beta = 0.3.
  const double mean = power / (8.0 * n_draws);
  CHECK_LT(std::abs(mean - 0.3) / 0.3, 5.0 / std::sqrt(8.0 * n_draws));
}

TEST_CASE("noiseless training observation is the amplified superposition") {
  const auto config =
      SystemConfig::with_uniform_pilots(2, 2, 4, 2, 20, 1.0, 2.0);
  const auto ls = two_cell_links();
  RandomStream rng(31);
  const ChannelRealization ch = draw_channel(config, ls, 0, rng);
  const auto pilots = pilot_matrix(2, 2);
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(4, 2);
  const PilotObservation obs =
      observe_pilots_with_noise(config, ls, ch, pilots, zero);

  // Correlating against pilot n recovers sum_l sqrt((K+1) rho) h_ln.
  for (int n = 0; n < 2; ++n) {
    Eigen::VectorXcd expect = Eigen::VectorXcd::Zero(4);
    for (int l = 0; l < 2; ++l) {
      expect += std::sqrt((ls.ricean_k(l, n) + 1.0) * 2.0) * ch.h[l].col(n);
    }
    const Eigen::VectorXcd got = obs.y_train * pilots.col(n);
    CHECK_LT((got - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST_CASE("data observation is the power-scaled channel sum plus noise") {
  const auto config =
      SystemConfig::with_uniform_pilots(2, 2, 4, 2, 20, 4.0, 1.0);
  const auto ls = two_cell_links();
  RandomStream rng(37);
  const ChannelRealization ch = draw_channel(config, ls, 0, rng);
  const Eigen::MatrixXcd symbols = Eigen::MatrixXcd::Ones(2, 2);
  const Eigen::VectorXcd noise =
      Eigen::VectorXcd::Constant(4, std::complex<double>(0.5, -0.5));
  const Eigen::VectorXcd y = observe_data_with_noise(config, ch, symbols, noise);

  Eigen::VectorXcd expect = noise;
  for (int l = 0; l < 2; ++l)
    for (int n = 0; n < 2; ++n) expect += 2.0 * ch.h[l].col(n);
  CHECK_LT((y - expect).cwiseAbs().maxCoeff(), 1e-12);

  CHECK_THROWS_AS(
      observe_data_with_noise(config, ch, Eigen::MatrixXcd::Ones(1, 2), noise),
      DimensionError);
}

TEST_CASE("channel dump round-trips bit for bit") {
  const auto config =
      SystemConfig::with_uniform_pilots(2, 3, 5, 3, 20, 1.0, 1.0);
  auto ls = LargeScaleRealization::constant(2, 3, 0.6, 1.0, 0.9);
  RandomStream rng(41);
  const ChannelRealization ch = draw_channel(config, ls, 1, rng);

  std::stringstream buffer;
  write_channel_dump(buffer, ch);
  const auto back = read_channel_dump(buffer);
  REQUIRE_EQ(back.size(), 2u);
  for (int l = 0; l < 2; ++l) {
    CHECK_EQ(back[l].rows(), 5);
    CHECK_EQ(back[l].cols(), 3);
    CHECK_EQ((back[l] - ch.h[l]).cwiseAbs().maxCoeff(), 0.0);
  }

  std::stringstream junk("definitely not a dump");
  CHECK_THROWS_AS(read_channel_dump(junk), ParseError);
}

}  // TEST_SUITE
