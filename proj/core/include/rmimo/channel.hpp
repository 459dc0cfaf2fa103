#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "rmimo/large_scale.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/system_config.hpp"

namespace rmimo {

// Channels from every user to one base station for a single coherence block.
// h[l] is antennas x users: column n is the composite channel of user n of
// cell l.  Same-cell users carry a deterministic LOS ray mixed with the
// Rayleigh part by their Ricean factor; other-cell users are pure NLOS.
struct ChannelRealization {
  int observed_cell = 0;
  std::vector<Eigen::MatrixXcd> h;     // composite, per source cell
  std::vector<Eigen::MatrixXcd> nlos;  // the CN(0, beta I) parts alone
  Eigen::MatrixXcd los;                // same-cell LOS rays, antennas x users
};

// Uniform linear array response scaled to carry power beta:
// entry m is sqrt(beta) * exp(-i * 2*pi * spacing * m * sin(theta)).
Eigen::VectorXcd los_steering(int antennas, double beta, double theta,
                              double spacing);

// Draws the small-scale fading.  Consumes rng in a fixed order: the NLOS
// matrix of cell 0 column by column, then cell 1, and so on.
ChannelRealization draw_channel(const SystemConfig& config,
                                const LargeScaleRealization& ls,
                                int observed_cell, RandomStream& rng);

// Training matrix, pilot_symbols x users: column n is the sequence of user n
// (reused in every cell).  Columns are orthonormal, which needs
// pilot_symbols >= users; otherwise DimensionError.
Eigen::MatrixXcd pilot_matrix(int pilot_symbols, int users);

struct PilotObservation {
  Eigen::MatrixXcd y_train;  // antennas x pilot_symbols
};

// Training-phase receive matrix: superposition of all cells' pilots through
// their channels, each user amplified by sqrt((K+1) * pilot_power), plus
// unit-variance noise drawn from rng.
PilotObservation observe_pilots(const SystemConfig& config,
                                const LargeScaleRealization& ls,
                                const ChannelRealization& channel,
                                const Eigen::MatrixXcd& pilots,
                                RandomStream& rng);

// Same with caller-supplied noise (antennas x pilot_symbols), for tests that
// need the noise pinned.
PilotObservation observe_pilots_with_noise(const SystemConfig& config,
                                           const LargeScaleRealization& ls,
                                           const ChannelRealization& channel,
                                           const Eigen::MatrixXcd& pilots,
                                           const Eigen::MatrixXcd& noise);

// Data-phase receive vector for one symbol slot.  symbols is cells x users,
// entry (l, n) the unit-power symbol of user n of cell l.
Eigen::VectorXcd observe_data(const SystemConfig& config,
                              const ChannelRealization& channel,
                              const Eigen::MatrixXcd& symbols,
                              RandomStream& rng);

Eigen::VectorXcd observe_data_with_noise(const SystemConfig& config,
                                         const ChannelRealization& channel,
                                         const Eigen::MatrixXcd& symbols,
                                         const Eigen::VectorXcd& noise);

// Binary dump of the composite channel tensor, for offline inspection.
// Layout: magic "RMIMOCH1", int32 cells/users/antennas/observed_cell, then
// per cell the antennas x users matrix in row-major order as interleaved
// re/im doubles, little-endian.
void write_channel_dump(std::ostream& out, const ChannelRealization& channel);
std::vector<Eigen::MatrixXcd> read_channel_dump(std::istream& in);

}  // namespace rmimo
