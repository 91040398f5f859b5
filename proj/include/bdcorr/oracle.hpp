#pragma once

// Brute-force minimizers of the trace distance over product states,
// locally measured states and classical-quantum states. They share no code
// path with the closed forms in td_correlations.hpp beyond the matrix
// primitives, and are used to validate them.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "bdcorr/matcore.hpp"
#include "bdcorr/nelder_mead.hpp"
#include "bdcorr/states.hpp"
#include "bdcorr/td_correlations.hpp"

namespace bdcorr {

// Bloch axis of a projective measurement on A; theta in [0, pi], phi in [0, 2 pi).
struct MeasurementAxis {
  double theta = 0.0;
  double phi = 0.0;

  std::array<double, 3> direction() const noexcept {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
};

struct ProductSearchResult {
  double value = 0.0;
  ProductState witness;
};

struct MeasurementSearchResult {
  double value = 0.0;
  MeasurementAxis axis;
};

struct ClassicalSearchResult {
  double value = 0.0;
  DensityMatrix witness = DensityMatrix::maximally_mixed(4);
};

namespace oracle_detail {

inline constexpr int kAngularGrid = 64;

// Radial projection onto the closed unit ball.
inline BlochQubit clamp_bloch(double x, double y, double z) noexcept {
  BlochQubit q{{x, y, z}};
  const double n = q.norm();
  if (n > 1.0) {
    for (double& c : q.v) c /= n;
  }
  return q;
}

inline BlochQubit bloch_of(const ComplexMatrix& qubit) noexcept {
  return BlochQubit{{2.0 * qubit(0, 1).real(), -2.0 * qubit(0, 1).imag(),
                     (qubit(0, 0) - qubit(1, 1)).real()}};
}

inline ComplexMatrix bloch_matrix_unchecked(const BlochQubit& q) noexcept {
  using namespace std::complex_literals;
  return ComplexMatrix(2, {0.5 * (1.0 + q.v[2]), 0.5 * (q.v[0] - 1i * q.v[1]),
                           0.5 * (q.v[0] + 1i * q.v[1]), 0.5 * (1.0 - q.v[2])});
}

inline MeasurementAxis normalized_axis(double theta, double phi) noexcept {
  const MeasurementAxis raw{theta, phi};
  const auto n = raw.direction();
  MeasurementAxis out;
  out.theta = std::acos(std::clamp(n[2], -1.0, 1.0));
  out.phi = std::atan2(n[1], n[0]);
  if (out.phi < 0.0) out.phi += 2.0 * std::numbers::pi;
  if (out.phi >= 2.0 * std::numbers::pi) out.phi = 0.0;
  return out;
}

inline ComplexMatrix axis_projector(double theta, double phi, double sign) noexcept {
  const auto n = MeasurementAxis{theta, phi}.direction();
  return bloch_matrix_unchecked(BlochQubit{{sign * n[0], sign * n[1], sign * n[2]}});
}

// Pi_A[rho] = sum_{+-} (P_+- (x) I) rho (P_+- (x) I).
inline ComplexMatrix measured_state(const ComplexMatrix& rho, double theta, double phi) {
  ComplexMatrix out(4);
  const ComplexMatrix id = ComplexMatrix::identity(2);
  for (double sign : {1.0, -1.0}) {
    const ComplexMatrix p = kron(axis_projector(theta, phi, sign), id);
    out += p * rho * p;
  }
  return out;
}

inline double measurement_objective(const ComplexMatrix& rho, double theta, double phi) {
  return 0.5 * detail::trace_norm_unchecked(rho - measured_state(rho, theta, phi));
}

inline ComplexMatrix product_from_params(std::span<const double> p) {
  return kron(bloch_matrix_unchecked(clamp_bloch(p[0], p[1], p[2])),
              bloch_matrix_unchecked(clamp_bloch(p[3], p[4], p[5])));
}

// Parameters: theta, phi, p, tau1 (3), tau2 (3).
inline ComplexMatrix classical_from_params(std::span<const double> p) {
  const double weight = std::clamp(p[2], 0.0, 1.0);
  ComplexMatrix chi =
      kron(axis_projector(p[0], p[1], 1.0), bloch_matrix_unchecked(clamp_bloch(p[3], p[4], p[5]))) *
      Complex(weight);
  chi += kron(axis_projector(p[0], p[1], -1.0),
              bloch_matrix_unchecked(clamp_bloch(p[6], p[7], p[8]))) *
         Complex(1.0 - weight);
  return chi;
}

inline std::array<double, 3> random_in_ball(std::mt19937_64& gen) {
  for (;;) {
    std::array<double, 3> v{};
    for (double& c : v) c = 2.0 * detail::unit_uniform(gen) - 1.0;
    if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] <= 1.0) return v;
  }
}

// Angles (theta, phi) of coordinate axis k.
inline std::array<double, 2> coordinate_axis_angles(std::size_t k) noexcept {
  const double half_pi = std::numbers::pi / 2.0;
  if (k == 0) return {half_pi, 0.0};
  if (k == 1) return {half_pi, half_pi};
  return {0.0, 0.0};
}

// Bell diagonal projection of rho (keeps only the R_ii), used for warm
// starts; always physical.
inline BellDiagonal twirled(const DensityMatrix& rho) { return extract_r(rho); }

// Distinct stream tags so each search draws from its own sequence.
enum StreamTag : std::uint64_t { kProductStream = 1, kMeasurementStream = 2, kClassicalStream = 3 };

}  // namespace oracle_detail

inline ProductSearchResult min_product_distance(const DensityMatrix& rho,
                                                const OptimizerConfig& cfg) {
  if (rho.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "product search needs dim 4");
  cfg.validate();
  const ComplexMatrix& m = rho.matrix();
  auto objective = [&](std::span<const double> p) {
    return 0.5 * detail::trace_norm_unchecked(m - oracle_detail::product_from_params(p));
  };

  std::vector<std::array<double, 6>> starts;
  {
    const BlochQubit a = oracle_detail::bloch_of(partial_trace(rho, Subsystem::A).matrix());
    const BlochQubit b = oracle_detail::bloch_of(partial_trace(rho, Subsystem::B).matrix());
    starts.push_back({a.v[0], a.v[1], a.v[2], b.v[0], b.v[1], b.v[2]});
  }
  const BellDiagonal r = oracle_detail::twirled(rho);
  if (cfg.analytic_warm_start && bd_validate(r)) {
    const ProductState w = td_total(r).witness;
    starts.push_back({w.a.v[0], w.a.v[1], w.a.v[2], w.b.v[0], w.b.v[1], w.b.v[2]});
  }
  std::mt19937_64 gen = detail::make_stream(cfg.seed, oracle_detail::kProductStream);
  for (int s = 0; s < cfg.starts; ++s) {
    const auto a = oracle_detail::random_in_ball(gen);
    const auto b = oracle_detail::random_in_ball(gen);
    starts.push_back({a[0], a[1], a[2], b[0], b[1], b[2]});
  }

  ProductSearchResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const MinimizeResult res = nelder_mead_restarted(objective, std::span<const double>(s), cfg);
    if (res.min < best.value) {
      best.value = res.min;
      const auto& p = res.argmin;
      best.witness = ProductState{oracle_detail::clamp_bloch(p[0], p[1], p[2]),
                                  oracle_detail::clamp_bloch(p[3], p[4], p[5])};
    }
  }
  return best;
}

inline MeasurementSearchResult min_measurement_distance(const DensityMatrix& rho,
                                                        const OptimizerConfig& cfg) {
  if (rho.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "measurement search needs dim 4");
  cfg.validate();
  const ComplexMatrix& m = rho.matrix();
  auto objective = [&](std::span<const double> p) {
    return oracle_detail::measurement_objective(m, p[0], p[1]);
  };

  // Coarse grid; keep the best few as starts.
  constexpr int kGrid = oracle_detail::kAngularGrid;
  constexpr std::size_t kGridStarts = 3;
  std::vector<std::pair<double, std::array<double, 2>>> grid;
  grid.reserve(kGrid * kGrid);
  for (int i = 0; i < kGrid; ++i) {
    const double theta = std::numbers::pi * i / kGrid;
    for (int j = 0; j < kGrid; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / kGrid;
      grid.push_back({objective(std::array<double, 2>{theta, phi}), {theta, phi}});
      if (i == 0) break;  // the pole is a single axis
    }
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::array<double, 2>> starts;
  for (std::size_t i = 0; i < std::min(kGridStarts, grid.size()); ++i) starts.push_back(grid[i].second);
  std::mt19937_64 gen = detail::make_stream(cfg.seed, oracle_detail::kMeasurementStream);
  for (int s = 0; s < cfg.starts; ++s) {
    const double theta = std::acos(2.0 * detail::unit_uniform(gen) - 1.0);
    const double phi = 2.0 * std::numbers::pi * detail::unit_uniform(gen);
    starts.push_back({theta, phi});
  }

  MeasurementSearchResult best;
  best.value = grid.front().first;
  best.axis = oracle_detail::normalized_axis(grid.front().second[0], grid.front().second[1]);
  for (const auto& s : starts) {
    const MinimizeResult res = nelder_mead_restarted(objective, std::span<const double>(s), cfg, 0.2);
    if (res.min < best.value) {
      best.value = res.min;
      best.axis = oracle_detail::normalized_axis(res.argmin[0], res.argmin[1]);
    }
  }
  return best;
}

inline ClassicalSearchResult min_classical_distance(const DensityMatrix& rho,
                                                    const OptimizerConfig& cfg) {
  if (rho.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "classical search needs dim 4");
  cfg.validate();
  const ComplexMatrix& m = rho.matrix();
  auto objective = [&](std::span<const double> p) {
    return 0.5 * detail::trace_norm_unchecked(m - oracle_detail::classical_from_params(p));
  };

  std::vector<std::array<double, 9>> starts;
  {
    // The measured state Pi_A[rho] is itself classical.
    const MeasurementSearchResult meas = min_measurement_distance(rho, cfg);
    const double theta = meas.axis.theta;
    const double phi = meas.axis.phi;
    std::array<double, 9> s{theta, phi, 0.5, 0, 0, 0, 0, 0, 0};
    const ComplexMatrix id = ComplexMatrix::identity(2);
    for (int branch = 0; branch < 2; ++branch) {
      const double sign = branch == 0 ? 1.0 : -1.0;
      const ComplexMatrix p = kron(oracle_detail::axis_projector(theta, phi, sign), id);
      const ComplexMatrix cond = p * m * p;
      const double weight = cond.trace().real();
      if (branch == 0) s[2] = weight;
      if (weight > 1e-14) {
        const DensityMatrix tau = partial_trace(
            DensityMatrix::assume_valid(cond * Complex(1.0 / weight)), Subsystem::B);
        const BlochQubit q = oracle_detail::bloch_of(tau.matrix());
        for (std::size_t i = 0; i < 3; ++i) s[3 + 3 * static_cast<std::size_t>(branch) + i] = q.v[i];
      }
    }
    starts.push_back(s);
  }
  const BellDiagonal r = oracle_detail::twirled(rho);
  if (cfg.analytic_warm_start && bd_validate(r)) {
    const SortedModuli sm = sort_moduli(r);
    const auto angles = oracle_detail::coordinate_axis_angles(sm.idx_max);
    std::array<double, 9> s{angles[0], angles[1], 0.5, 0, 0, 0, 0, 0, 0};
    s[3 + sm.idx_max] = r[sm.idx_max];
    s[6 + sm.idx_max] = -r[sm.idx_max];
    starts.push_back(s);
  }
  std::mt19937_64 gen = detail::make_stream(cfg.seed, oracle_detail::kClassicalStream);
  for (int k = 0; k < cfg.starts; ++k) {
    const double theta = std::acos(2.0 * detail::unit_uniform(gen) - 1.0);
    const double phi = 2.0 * std::numbers::pi * detail::unit_uniform(gen);
    const double weight = detail::unit_uniform(gen);
    const auto t1 = oracle_detail::random_in_ball(gen);
    const auto t2 = oracle_detail::random_in_ball(gen);
    starts.push_back({theta, phi, weight, t1[0], t1[1], t1[2], t2[0], t2[1], t2[2]});
  }

  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  for (const auto& s : starts) {
    const MinimizeResult res = nelder_mead_restarted(objective, std::span<const double>(s), cfg);
    if (res.min < best_value) {
      best_value = res.min;
      best_params = res.argmin;
    }
  }
  return ClassicalSearchResult{
      best_value, DensityMatrix::assume_valid(oracle_detail::classical_from_params(best_params))};
}

struct VerifyRow {
  BellDiagonal state;
  double analytic_total = 0.0;
  double oracle_total = 0.0;
  double analytic_discord = 0.0;
  double oracle_discord = 0.0;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  double max_total_diff = 0.0;    // max |analytic_T - oracle_T|
  double max_discord_diff = 0.0;  // max |analytic_D - oracle_D|
  std::size_t undercuts = 0;      // oracle_T < analytic_T - undercut_tol
  std::size_t total_within = 0;   // |oracle_T - analytic_T| <= agree_tol
  std::size_t grid_refinements = 0;

  static constexpr double undercut_tol = 1e-6;
  static constexpr double agree_tol = 1e-4;
};

namespace oracle_detail {

inline std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace oracle_detail

// Samples `count` Bell diagonal states and compares the closed-form total
// correlations and discord with the product-state and measurement oracles.
// Each sample uses its own seed derived from (seed, index), so the report
// does not depend on `threads`.
inline VerifyReport verify_sweep(std::size_t count, std::uint64_t seed, const OptimizerConfig& cfg,
                                 unsigned threads = 1) {
  cfg.validate();
  const std::vector<BellDiagonal> states = sample_bd(count, seed);
  VerifyReport report;
  report.rows.resize(count);
  std::vector<char> refined(count, 0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      OptimizerConfig local = cfg;
      local.seed = oracle_detail::sample_seed(cfg.seed, i);
      const BellDiagonal& r = states[i];
      const DensityMatrix rho = bd_to_matrix(r);
      const TotalCorrelation total = td_total(r);
      refined[i] = total.grid_refined ? 1 : 0;
      report.rows[i] = VerifyRow{r, total.value, min_product_distance(rho, local).value,
                                 td_discord(r), min_measurement_distance(rho, local).value};
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    work(0, count);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = std::min(count, t * chunk);
      const std::size_t e = std::min(count, b + chunk);
      pool.emplace_back(work, b, e);
    }
  }

  for (std::size_t i = 0; i < count; ++i) {
    const VerifyRow& row = report.rows[i];
    const double dt = row.oracle_total - row.analytic_total;
    report.max_total_diff = std::max(report.max_total_diff, std::abs(dt));
    report.max_discord_diff =
        std::max(report.max_discord_diff, std::abs(row.oracle_discord - row.analytic_discord));
    if (dt < -VerifyReport::undercut_tol) ++report.undercuts;
    if (std::abs(dt) <= VerifyReport::agree_tol) ++report.total_within;
    report.grid_refinements += static_cast<std::size_t>(refined[i]);
  }
  return report;
}

}  // namespace bdcorr
