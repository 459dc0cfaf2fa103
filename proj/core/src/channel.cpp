#include "rmimo/channel.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>

namespace rmimo {

Eigen::VectorXcd los_steering(int antennas, double beta, double theta,
                              double spacing) {
  if (antennas < 1) throw DimensionError("antennas must be >= 1");
  Eigen::VectorXcd v(antennas);
  const double amp = std::sqrt(beta);
  const double phase_step = -2.0 * std::numbers::pi * spacing * std::sin(theta);
  for (int m = 0; m < antennas; ++m)
    v(m) = std::polar(amp, phase_step * m);
  return v;
}

ChannelRealization draw_channel(const SystemConfig& config,
                                const LargeScaleRealization& ls,
                                int observed_cell, RandomStream& rng) {
  const int cells = config.cells;
  const int users = config.users_per_cell;
  const int antennas = config.antennas;
  if (observed_cell < 0 || observed_cell >= cells)
    throw IndexError("observed_cell out of range");
  if (ls.cells() != cells || ls.users() != users)
    throw DimensionError("large-scale realization does not match config");

  ChannelRealization ch;
  ch.observed_cell = observed_cell;
  ch.nlos.assign(cells, Eigen::MatrixXcd(antennas, users));
  for (int l = 0; l < cells; ++l) {
    for (int n = 0; n < users; ++n) {
      const double amp = std::sqrt(ls.beta[observed_cell](l, n));
      for (int m = 0; m < antennas; ++m)
        ch.nlos[l](m, n) = amp * rng.cnormal();
    }
  }

  ch.los.resize(antennas, users);
  for (int n = 0; n < users; ++n) {
    ch.los.col(n) =
        los_steering(antennas, ls.beta[observed_cell](observed_cell, n),
                     ls.aoa(observed_cell, n), config.spacing);
  }

  ch.h = ch.nlos;
  for (int n = 0; n < users; ++n) {
    const double k = ls.ricean_k(observed_cell, n);
    ch.h[observed_cell].col(n) =
        std::sqrt(k / (k + 1.0)) * ch.los.col(n) +
        std::sqrt(1.0 / (k + 1.0)) * ch.nlos[observed_cell].col(n);
  }
  return ch;
}

Eigen::MatrixXcd pilot_matrix(int pilot_symbols, int users) {
  if (pilot_symbols < 1 || users < 1)
    throw DimensionError("pilot_symbols and users must be >= 1");
  if (pilot_symbols < users)
    throw DimensionError(
        "orthonormal pilots need pilot_symbols >= users (got " +
        std::to_string(pilot_symbols) + " < " + std::to_string(users) + ")");
  // First `users` columns of the tau-point DFT, scaled to unit norm.
  Eigen::MatrixXcd pilots(pilot_symbols, users);
  const double norm = 1.0 / std::sqrt(static_cast<double>(pilot_symbols));
  for (int s = 0; s < pilot_symbols; ++s) {
    for (int n = 0; n < users; ++n) {
      const double phase =
          -2.0 * std::numbers::pi * static_cast<double>(s) * n / pilot_symbols;
      pilots(s, n) = std::polar(norm, phase);
    }
  }
  return pilots;
}

namespace {

// Training amplitudes: column n of cell l is scaled by sqrt((K+1) * rho).
Eigen::MatrixXcd pilot_superposition(const SystemConfig& config,
                                     const LargeScaleRealization& ls,
                                     const ChannelRealization& channel,
                                     const Eigen::MatrixXcd& pilots) {
  const int cells = config.cells;
  const int users = config.users_per_cell;
  if (pilots.rows() != config.pilot_symbols || pilots.cols() != users)
    throw DimensionError("pilot matrix must be pilot_symbols x users");

  Eigen::MatrixXcd amplified(config.antennas, users);
  amplified.setZero();
  for (int l = 0; l < cells; ++l) {
    for (int n = 0; n < users; ++n) {
      const double scale = std::sqrt((ls.ricean_k(l, n) + 1.0) *
                                     config.pilot_powers(l, n));
      amplified.col(n) += scale * channel.h[l].col(n);
    }
  }
  return amplified * pilots.adjoint();
}

}  // namespace

PilotObservation observe_pilots_with_noise(const SystemConfig& config,
                                           const LargeScaleRealization& ls,
                                           const ChannelRealization& channel,
                                           const Eigen::MatrixXcd& pilots,
                                           const Eigen::MatrixXcd& noise) {
  if (noise.rows() != config.antennas || noise.cols() != config.pilot_symbols)
    throw DimensionError("noise must be antennas x pilot_symbols");
  return {pilot_superposition(config, ls, channel, pilots) + noise};
}

PilotObservation observe_pilots(const SystemConfig& config,
                                const LargeScaleRealization& ls,
                                const ChannelRealization& channel,
                                const Eigen::MatrixXcd& pilots,
                                RandomStream& rng) {
  Eigen::MatrixXcd noise(config.antennas, config.pilot_symbols);
  for (int s = 0; s < config.pilot_symbols; ++s)
    for (int m = 0; m < config.antennas; ++m)
      noise(m, s) = rng.cnormal();
  return observe_pilots_with_noise(config, ls, channel, pilots, noise);
}

Eigen::VectorXcd observe_data_with_noise(const SystemConfig& config,
                                         const ChannelRealization& channel,
                                         const Eigen::MatrixXcd& symbols,
                                         const Eigen::VectorXcd& noise) {
  if (symbols.rows() != config.cells || symbols.cols() != config.users_per_cell)
    throw DimensionError("symbols must be cells x users");
  if (noise.size() != config.antennas)
    throw DimensionError("noise must have one entry per antenna");

  Eigen::VectorXcd received = noise;
  const double amp = std::sqrt(config.uplink_power);
  for (int l = 0; l < config.cells; ++l)
    received += amp * (channel.h[l] * symbols.row(l).transpose());
  return received;
}

Eigen::VectorXcd observe_data(const SystemConfig& config,
                              const ChannelRealization& channel,
                              const Eigen::MatrixXcd& symbols,
                              RandomStream& rng) {
  Eigen::VectorXcd noise(config.antennas);
  for (int m = 0; m < config.antennas; ++m) noise(m) = rng.cnormal();
  return observe_data_with_noise(config, channel, symbols, noise);
}

namespace {

constexpr char kDumpMagic[8] = {'R', 'M', 'I', 'M', 'O', 'C', 'H', '1'};

void put_i32(std::ostream& out, std::int32_t v) {
  unsigned char b[4];
  b[0] = static_cast<unsigned char>(v & 0xff);
  b[1] = static_cast<unsigned char>((v >> 8) & 0xff);
  b[2] = static_cast<unsigned char>((v >> 16) & 0xff);
  b[3] = static_cast<unsigned char>((v >> 24) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::int32_t get_i32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw ParseError("channel dump truncated");
  return static_cast<std::int32_t>(
      static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
      (static_cast<std::uint32_t>(b[2]) << 16) |
      (static_cast<std::uint32_t>(b[3]) << 24));
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i)
    b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw ParseError("channel dump truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_channel_dump(std::ostream& out, const ChannelRealization& channel) {
  out.write(kDumpMagic, sizeof kDumpMagic);
  const std::int32_t cells = static_cast<std::int32_t>(channel.h.size());
  const std::int32_t antennas = cells ? channel.h[0].rows() : 0;
  const std::int32_t users = cells ? channel.h[0].cols() : 0;
  put_i32(out, cells);
  put_i32(out, users);
  put_i32(out, antennas);
  put_i32(out, channel.observed_cell);
  for (const auto& mat : channel.h) {
    for (Eigen::Index m = 0; m < mat.rows(); ++m) {
      for (Eigen::Index n = 0; n < mat.cols(); ++n) {
        put_f64(out, mat(m, n).real());
        put_f64(out, mat(m, n).imag());
      }
    }
  }
}

std::vector<Eigen::MatrixXcd> read_channel_dump(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kDumpMagic, sizeof magic) != 0)
    throw ParseError("not a channel dump (bad magic)");
  const std::int32_t cells = get_i32(in);
  const std::int32_t users = get_i32(in);
  const std::int32_t antennas = get_i32(in);
  get_i32(in);  // observed cell, not needed to reconstruct the tensor
  if (cells < 0 || users < 0 || antennas < 0)
    throw ParseError("channel dump has negative dimensions");

  std::vector<Eigen::MatrixXcd> h(cells, Eigen::MatrixXcd(antennas, users));
  for (auto& mat : h) {
    for (std::int32_t m = 0; m < antennas; ++m) {
      for (std::int32_t n = 0; n < users; ++n) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        mat(m, n) = {re, im};
      }
    }
  }
  return h;
}

}  // namespace rmimo
