#include "rmimo/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "rmimo/rng.hpp"

namespace rmimo {
namespace {

// Fixed work partition: the sample range is cut into batch_count contiguous
// batches up front; workers claim batch indices from a counter and write
// into per-batch slots, and the merge walks slots in index order.  The
// partition depends on the sample count only, so any worker count produces
// bit-identical results.
constexpr int kMaxBatches = 10;

int batch_count(int n_samples) { return std::min(kMaxBatches, n_samples); }

template <typename BatchFn>
void run_batches(int n_samples, int workers, BatchFn&& fn) {
  const int batches = batch_count(n_samples);
  auto bounds = [&](int b) {
    const long lo = static_cast<long>(n_samples) * b / batches;
    const long hi = static_cast<long>(n_samples) * (b + 1) / batches;
    return std::pair<int, int>{static_cast<int>(lo), static_cast<int>(hi)};
  };

  if (workers <= 1 || batches <= 1) {
    for (int b = 0; b < batches; ++b) {
      auto [lo, hi] = bounds(b);
      fn(b, lo, hi);
    }
    return;
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next.fetch_add(1); b < batches; b = next.fetch_add(1)) {
      auto [lo, hi] = bounds(b);
      fn(b, lo, hi);
    }
  };
  std::vector<std::jthread> pool;
  const int spawn = std::min(workers, batches);
  pool.reserve(spawn);
  for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
}

double sample_std_error(double sum, double sum_sq, long n) {
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  return std::sqrt(std::max(var, 0.0) / n);
}

// Mean and batch-means standard error across per-batch values.
std::pair<double, double> batch_means(const std::vector<double>& values) {
  const int b = static_cast<int>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= b;
  if (b < 2) return {mean, 0.0};
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (b - 1);
  return {mean, std::sqrt(var / b)};
}

struct SinrMoments {
  std::complex<double> m1;  // sum of h_hat' h over samples
  double m2 = 0.0;          // sum over all (l, t) of |h_hat' h_lt|^2
  double m3 = 0.0;          // sum of ||h_hat||^2
  long count = 0;

  void merge(const SinrMoments& other) {
    m1 += other.m1;
    m2 += other.m2;
    m3 += other.m3;
    count += other.count;
  }

  double sinr(double uplink_power) const {
    const std::complex<double> mean1 = m1 / static_cast<double>(count);
    const double mean2 = m2 / count;
    const double mean3 = m3 / count;
    const double signal = std::norm(mean1);
    return uplink_power * signal /
           (uplink_power * (mean2 - signal) + mean3);
  }
};

void check_mc_inputs(const SystemConfig& config,
                     const LargeScaleRealization& ls, int observed_cell,
                     const McSettings& settings) {
  validate_config(config);
  if (observed_cell < 0 || observed_cell >= config.cells)
    throw IndexError("observed_cell out of range");
  if (ls.cells() != config.cells || ls.users() != config.users_per_cell)
    throw DimensionError("large-scale realization does not match config");
  if (settings.n_small_scale < 2)
    throw InsufficientSamples("need at least 2 coherence-block samples");
}

}  // namespace

EmpiricalSinr estimate_sinr_empirical(const SystemConfig& config,
                                      const LargeScaleRealization& ls,
                                      int observed_cell, EstimatorKind kind,
                                      const McSettings& settings) {
  check_mc_inputs(config, ls, observed_cell, settings);

  const int users = config.users_per_cell;
  const int n = settings.n_small_scale;
  const int batches = batch_count(n);
  const Eigen::MatrixXcd pilots =
      pilot_matrix(config.pilot_symbols, users);

  // acc[b][u]: moments of user u accumulated over batch b.
  std::vector<std::vector<SinrMoments>> acc(
      batches, std::vector<SinrMoments>(users));

  run_batches(n, settings.parallelism, [&](int b, int lo, int hi) {
    auto& slot = acc[b];
    for (int s = lo; s < hi; ++s) {
      // Stream index 1+s: index 0 under this seed belongs to the geometry
      // draw of the owning large-scale realization.
      RandomStream rng = split_stream(settings.seed, 1 + s);
      const ChannelRealization ch =
          draw_channel(config, ls, observed_cell, rng);
      const PilotObservation obs =
          observe_pilots(config, ls, ch, pilots, rng);
      const EstimateSet est =
          estimate(obs, pilots, config, ls, observed_cell, kind);
      for (int u = 0; u < users; ++u) {
        const Eigen::VectorXcd h_hat = est.h_hat.col(u);
        slot[u].m1 += h_hat.dot(ch.h[observed_cell].col(u));
        for (int l = 0; l < config.cells; ++l)
          for (int t = 0; t < users; ++t)
            slot[u].m2 += std::norm(h_hat.dot(ch.h[l].col(t)));
        slot[u].m3 += h_hat.squaredNorm();
        slot[u].count += 1;
      }
    }
  });

  EmpiricalSinr out;
  out.n_samples = n;
  out.sinr.resize(users);
  out.std_error.resize(users);
  for (int u = 0; u < users; ++u) {
    SinrMoments total;
    std::vector<double> per_batch;
    per_batch.reserve(batches);
    for (int b = 0; b < batches; ++b) {
      total.merge(acc[b][u]);
      per_batch.push_back(acc[b][u].sinr(config.uplink_power));
    }
    out.sinr[u] = total.sinr(config.uplink_power);
    out.std_error[u] = batch_means(per_batch).second;
  }
  return out;
}

double moment_closed_form(MomentTerm term, const SystemConfig& config,
                          const LargeScaleRealization& ls, EstimatorKind kind,
                          const MomentIndices& indices) {
  const int j = indices.cell;
  const int n = indices.user;
  if (j < 0 || j >= config.cells) throw IndexError("cell out of range");
  if (n < 0 || n >= config.users_per_cell)
    throw IndexError("user out of range");

  const bool needs_other_user =
      term == MomentTerm::c || term == MomentTerm::e;
  const bool needs_other_cell =
      term == MomentTerm::d || term == MomentTerm::e;
  const int t = indices.other_user;
  const int l = indices.other_cell;
  if (needs_other_user && (t < 0 || t >= config.users_per_cell || t == n))
    throw IndexError("other_user must name a different same-cell user");
  if (needs_other_cell && (l < 0 || l >= config.cells || l == j))
    throw IndexError("other_cell must name a different cell");

  const int m = config.antennas;
  const double rho = config.pilot_powers(j, n);
  const double k = ls.ricean_k(j, n);
  const double beta = ls.beta[j](j, n);

  // Contamination-plus-noise level of the training correlation, divided by
  // the user's own training power.
  double gamma = 1.0;
  for (int c = 0; c < config.cells; ++c) {
    if (c == j) continue;
    gamma += config.pilot_powers(c, n) * (ls.ricean_k(c, n) + 1.0) *
             ls.beta[j](c, n);
  }
  gamma /= rho;

  // chi = 1 turns every expression below into its plain-LS form.
  double chi = 1.0;
  if (kind == EstimatorKind::mmse)
    chi = beta / (beta + gamma);

  const double k1 = k + 1.0;
  auto term_f = [&] {
    return m * beta * (k + chi * chi) / k1 + chi * chi * m * gamma / k1;
  };

  switch (term) {
    case MomentTerm::a: {
      const double mean = m * beta * (k + chi) / k1;
      return mean * mean;
    }
    case MomentTerm::b: {
      const double mean = m * beta * (k + chi) / k1;
      return mean * mean +
             m * beta * beta * (k * (1.0 + chi * chi) + chi * chi) / (k1 * k1) +
             chi * chi * m * beta * gamma / k1;
    }
    case MomentTerm::c: {
      const double k_t = ls.ricean_k(j, t);
      const double b_t = ls.beta[j](j, t);
      const double phi = phi_coupling(m, ls.aoa(j, n), ls.aoa(j, t));
      const double aligned = k / k1 * beta * b_t * phi * phi +
                             chi * chi * m * b_t * (beta + gamma) / k1;
      return k_t / (k_t + 1.0) * aligned + b_t / (k_t + 1.0) * term_f();
    }
    case MomentTerm::d: {
      const double b_l = ls.beta[j](l, n);
      const double s2 =
          config.pilot_powers(l, n) * (ls.ricean_k(l, n) + 1.0) / rho;
      return m * b_l * beta * (k + chi * chi) / k1 +
             chi * chi * m * b_l * gamma / k1 +
             chi * chi * s2 * static_cast<double>(m) * m * b_l * b_l / k1;
    }
    case MomentTerm::e:
      return ls.beta[j](l, t) * term_f();
    case MomentTerm::f:
      return term_f();
  }
  throw Error("unreachable");
}

MomentEstimate estimate_moment(MomentTerm term, const SystemConfig& config,
                               const LargeScaleRealization& ls,
                               EstimatorKind kind, const MomentIndices& indices,
                               const McSettings& settings) {
  check_mc_inputs(config, ls, indices.cell, settings);
  // Validates the index pattern for this term up front.
  const double closed = moment_closed_form(term, config, ls, kind, indices);

  const int n_samples = settings.n_small_scale;
  const int batches = batch_count(n_samples);
  const Eigen::MatrixXcd pilots =
      pilot_matrix(config.pilot_symbols, config.users_per_cell);

  struct Acc {
    std::complex<double> z;  // term a only
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;
  };
  std::vector<Acc> acc(batches);

  const int j = indices.cell;
  run_batches(n_samples, settings.parallelism, [&](int b, int lo, int hi) {
    Acc& slot = acc[b];
    for (int s = lo; s < hi; ++s) {
      RandomStream rng = split_stream(settings.seed, 1 + s);
      const ChannelRealization ch = draw_channel(config, ls, j, rng);
      const PilotObservation obs = observe_pilots(config, ls, ch, pilots, rng);
      const EstimateSet est = estimate(obs, pilots, config, ls, j, kind);
      const Eigen::VectorXcd h_hat = est.h_hat.col(indices.user);

      switch (term) {
        case MomentTerm::a: {
          const std::complex<double> v =
              h_hat.dot(ch.h[j].col(indices.user));
          slot.z += v;
          slot.sum_sq += std::norm(v);
          break;
        }
        case MomentTerm::b: {
          const double v = std::norm(h_hat.dot(ch.h[j].col(indices.user)));
          slot.sum += v;
          slot.sum_sq += v * v;
          break;
        }
        case MomentTerm::c: {
          const double v =
              std::norm(h_hat.dot(ch.h[j].col(indices.other_user)));
          slot.sum += v;
          slot.sum_sq += v * v;
          break;
        }
        case MomentTerm::d: {
          const double v =
              std::norm(h_hat.dot(ch.h[indices.other_cell].col(indices.user)));
          slot.sum += v;
          slot.sum_sq += v * v;
          break;
        }
        case MomentTerm::e: {
          const double v = std::norm(
              h_hat.dot(ch.h[indices.other_cell].col(indices.other_user)));
          slot.sum += v;
          slot.sum_sq += v * v;
          break;
        }
        case MomentTerm::f: {
          const double v = h_hat.squaredNorm();
          slot.sum += v;
          slot.sum_sq += v * v;
          break;
        }
      }
      slot.count += 1;
    }
  });

  Acc total;
  for (const Acc& a : acc) {
    total.z += a.z;
    total.sum += a.sum;
    total.sum_sq += a.sum_sq;
    total.count += a.count;
  }

  MomentEstimate out;
  out.term = term;
  out.indices = indices;
  out.n_samples = static_cast<int>(total.count);
  out.closed_form = closed;
  if (term == MomentTerm::a) {
    // mean = |z_bar|^2; the uncertainty follows from the complex sample
    // variance by the delta method (gradient magnitude 2 |z_bar|, each real
    // component carrying half the complex variance).
    const std::complex<double> z_bar =
        total.z / static_cast<double>(total.count);
    const double var_complex =
        (total.sum_sq / total.count - std::norm(z_bar)) *
        (static_cast<double>(total.count) / (total.count - 1));
    out.mean = std::norm(z_bar);
    out.std_error = 2.0 * std::abs(z_bar) *
                    std::sqrt(std::max(var_complex, 0.0) /
                              (2.0 * total.count));
  } else {
    out.mean = total.sum / total.count;
    out.std_error = sample_std_error(total.sum, total.sum_sq, total.count);
  }
  return out;
}

Eigen::VectorXcd mrc_combine(const EstimateSet& estimates,
                             const Eigen::VectorXcd& received) {
  if (estimates.h_hat.rows() != received.size())
    throw DimensionError("received vector length must match antenna count");
  return estimates.h_hat.adjoint() * received;
}

EmpiricalSinr estimate_sinr_symbol_level(const SystemConfig& config,
                                         const LargeScaleRealization& ls,
                                         int observed_cell, EstimatorKind kind,
                                         const McSettings& settings,
                                         int symbols_per_block) {
  check_mc_inputs(config, ls, observed_cell, settings);
  if (symbols_per_block < 1)
    throw DimensionError("symbols_per_block must be >= 1");

  const int users = config.users_per_cell;
  const int cells = config.cells;
  const int blocks = settings.n_small_scale;
  const int batches = batch_count(blocks);
  const Eigen::MatrixXcd pilots = pilot_matrix(config.pilot_symbols, users);

  // The combiner splits each soft symbol around the known mean effective
  // gain; everything else is residual.
  Eigen::VectorXd mean_gain(users);
  for (int u = 0; u < users; ++u) {
    MomentIndices idx;
    idx.cell = observed_cell;
    idx.user = u;
    mean_gain(u) = std::sqrt(
        moment_closed_form(MomentTerm::a, config, ls, kind, idx));
  }

  struct Acc {
    Eigen::ArrayXd resid_power;
    long symbols = 0;
  };
  std::vector<Acc> acc(batches);
  for (auto& a : acc) a.resid_power = Eigen::ArrayXd::Zero(users);

  const double amp = std::sqrt(config.uplink_power);
  run_batches(blocks, settings.parallelism, [&](int b, int lo, int hi) {
    Acc& slot = acc[b];
    for (int s = lo; s < hi; ++s) {
      RandomStream rng = split_stream(settings.seed, 1 + s);
      const ChannelRealization ch =
          draw_channel(config, ls, observed_cell, rng);
      const PilotObservation obs = observe_pilots(config, ls, ch, pilots, rng);
      const EstimateSet est =
          estimate(obs, pilots, config, ls, observed_cell, kind);

      Eigen::MatrixXcd symbols(cells, users);
      for (int slot_idx = 0; slot_idx < symbols_per_block; ++slot_idx) {
        for (int l = 0; l < cells; ++l)
          for (int u = 0; u < users; ++u)
            symbols(l, u) = std::polar(
                1.0, 2.0 * std::numbers::pi * rng.uniform());
        const Eigen::VectorXcd received =
            observe_data(config, ch, symbols, rng);
        const Eigen::VectorXcd soft = mrc_combine(est, received);
        for (int u = 0; u < users; ++u) {
          const std::complex<double> resid =
              soft(u) - amp * mean_gain(u) * symbols(observed_cell, u);
          slot.resid_power(u) += std::norm(resid);
        }
        slot.symbols += 1;
      }
    }
  });

  EmpiricalSinr out;
  out.sinr.resize(users);
  out.std_error.resize(users);
  long total_symbols = 0;
  for (const auto& a : acc) total_symbols += a.symbols;
  out.n_samples = static_cast<int>(total_symbols);

  for (int u = 0; u < users; ++u) {
    const double signal =
        config.uplink_power * mean_gain(u) * mean_gain(u);
    Eigen::ArrayXd batch_sinr(batches);
    double resid_total = 0.0;
    for (int b = 0; b < batches; ++b) {
      batch_sinr(b) = signal / (acc[b].resid_power(u) / acc[b].symbols);
      resid_total += acc[b].resid_power(u);
    }
    out.sinr[u] = signal / (resid_total / total_symbols);
    std::vector<double> per_batch(batch_sinr.data(),
                                  batch_sinr.data() + batches);
    out.std_error[u] = batch_means(per_batch).second;
  }
  return out;
}

SinrReport build_report(const SystemConfig& config,
                        const LargeScaleRealization& ls, int observed_cell,
                        const McSettings& settings) {
  const int users = config.users_per_cell;
  SinrReport report;

  report.closed_ls.provenance = Provenance::closed_form;
  report.closed_mmse.provenance = Provenance::closed_form;
  for (int u = 0; u < users; ++u) {
    report.closed_ls.values.push_back(
        sinr_closed(config, ls, observed_cell, u, EstimatorKind::ls));
    report.closed_mmse.values.push_back(
        sinr_closed(config, ls, observed_cell, u, EstimatorKind::mmse));
  }

  // Both estimators see the same channel and noise draws: the seed is
  // shared, so their comparison carries no simulation noise between them.
  report.empirical_ls.provenance = Provenance::monte_carlo;
  report.empirical_mmse.provenance = Provenance::monte_carlo;
  const EmpiricalSinr emp_ls = estimate_sinr_empirical(
      config, ls, observed_cell, EstimatorKind::ls, settings);
  const EmpiricalSinr emp_mmse = estimate_sinr_empirical(
      config, ls, observed_cell, EstimatorKind::mmse, settings);
  report.empirical_ls.values = emp_ls.sinr;
  report.empirical_ls_std_error = emp_ls.std_error;
  report.empirical_mmse.values = emp_mmse.sinr;
  report.empirical_mmse_std_error = emp_mmse.std_error;

  report.limit_m_ls.provenance = Provenance::asymptotic_m;
  report.limit_m_mmse.provenance = Provenance::asymptotic_m;
  report.limit_k_ls.provenance = Provenance::asymptotic_k;
  report.limit_k_mmse.provenance = Provenance::asymptotic_k;
  try {
    LabeledSeries ls_lim, mmse_lim;
    for (int u = 0; u < users; ++u) {
      ls_lim.values.push_back(sinr_limit_large_m(config, ls, observed_cell, u,
                                                 EstimatorKind::ls));
      mmse_lim.values.push_back(sinr_limit_large_m(
          config, ls, observed_cell, u, EstimatorKind::mmse));
    }
    report.limit_m_ls.values = std::move(ls_lim.values);
    report.limit_m_mmse.values = std::move(mmse_lim.values);
  } catch (const UnboundedLimit&) {
    // No large-array limit for this realization; the series stay empty.
  }
  if (has_shared_ricean_k(ls)) {
    for (int u = 0; u < users; ++u) {
      report.limit_k_ls.values.push_back(sinr_limit_large_k(
          config, ls, observed_cell, u, EstimatorKind::ls));
      report.limit_k_mmse.values.push_back(sinr_limit_large_k(
          config, ls, observed_cell, u, EstimatorKind::mmse));
    }
  }

  for (int u = 0; u < users; ++u) {
    report.se_ls.push_back(spectral_efficiency(report.closed_ls.values[u],
                                               config.coherence_symbols,
                                               config.pilot_symbols));
    report.se_mmse.push_back(spectral_efficiency(report.closed_mmse.values[u],
                                                 config.coherence_symbols,
                                                 config.pilot_symbols));
  }
  report.sum_se_ls = sum_spectral_efficiency(report.se_ls);
  report.sum_se_mmse = sum_spectral_efficiency(report.se_mmse);
  return report;
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::monte_carlo: return "monte_carlo";
    case Provenance::asymptotic_m: return "asymptotic_m";
    case Provenance::asymptotic_k: return "asymptotic_k";
  }
  return "unknown";
}

}  // namespace rmimo
