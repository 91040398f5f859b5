#pragma once

// Two non-Markovian local channels that keep Bell diagonal states Bell
// diagonal: phase flip with a random-telegraph memory kernel (time in
// nu = t / 2 tau) and random external fields with two equiprobable phases
// (time in g t). Trajectories carry both correlation hierarchies and the
// detected sudden changes.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bdcorr/entropic.hpp"
#include "bdcorr/error.hpp"
#include "bdcorr/matcore.hpp"
#include "bdcorr/states.hpp"
#include "bdcorr/td_correlations.hpp"

namespace bdcorr {

struct PhaseFlipParams {
  double tau = 5.0;        // memory time [s]
  double alpha_abs = 1.0;  // coupling |alpha| [1/s]

  // Only the oscillating regime 4 |alpha| tau > 1 has a real mu.
  void validate() const {
    if (!(tau > 0.0) || !(alpha_abs > 0.0)) {
      throw Error(ErrorKind::UnsupportedRegime, "phase flip needs tau > 0 and |alpha| > 0");
    }
    if (!(4.0 * alpha_abs * tau > 1.0)) {
      throw Error(ErrorKind::UnsupportedRegime,
                  "phase flip kernel needs 4 |alpha| tau > 1, got " +
                      std::to_string(4.0 * alpha_abs * tau));
    }
  }

  double mu() const {
    validate();
    const double x = 4.0 * alpha_abs * tau;
    return std::sqrt(x * x - 1.0);
  }
};

struct RandomFieldParams {
  double g = 1.0;  // qubit-field coupling [1/s]; trajectories run in g t

  void validate() const {
    if (!(g > 0.0)) throw Error(ErrorKind::UnsupportedRegime, "random field needs g > 0");
  }
};

using ChannelParams = std::variant<PhaseFlipParams, RandomFieldParams>;

inline const char* model_name(const ChannelParams& p) {
  return std::holds_alternative<PhaseFlipParams>(p) ? "phaseflip" : "randomfield";
}

// Index (0-based) of the component left untouched by the channel.
inline std::size_t constant_index(const ChannelParams& p) {
  return std::holds_alternative<PhaseFlipParams>(p) ? 2 : 1;
}

inline double phase_flip_f(double nu, const PhaseFlipParams& p) {
  const double mu = p.mu();
  return std::exp(-nu) * (std::cos(mu * nu) + std::sin(mu * nu) / mu);
}

inline BellDiagonal evolve_phase_flip(const BellDiagonal& r0, double nu, const PhaseFlipParams& p) {
  require_physical(r0);
  const double f = phase_flip_f(nu, p);
  const double f2 = f * f;
  return BellDiagonal{r0.r11 * f2, r0.r22 * f2, r0.r33};
}

// U_i(gt) in the computational ordering |0>, |1>, with phi_1 = 0 and
// phi_2 = pi. In the ordering |1>, |0> this reads
//   [[cos gt, e^{-i phi} sin gt], [-e^{i phi} sin gt, cos gt]].
inline ComplexMatrix random_field_unitary(int branch, double gt) {
  if (branch != 1 && branch != 2) {
    throw Error(ErrorKind::DimensionMismatch, "random field branch must be 1 or 2");
  }
  const double phi = branch == 1 ? 0.0 : std::numbers::pi;
  const Complex e = std::polar(1.0, phi);
  const double c = std::cos(gt);
  const double s = std::sin(gt);
  return ComplexMatrix(2, {c, -e * s, std::conj(e) * s, c});
}

inline DensityMatrix apply_random_field_map(const DensityMatrix& rho0, double gt) {
  if (rho0.dim() != 4) {
    throw Error(ErrorKind::DimensionMismatch, "random field map acts on two qubits");
  }
  ComplexMatrix out(4);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const ComplexMatrix u = kron(random_field_unitary(i, gt), random_field_unitary(j, gt));
      out += u * rho0.matrix() * u.adjoint();
    }
  }
  return DensityMatrix::assume_valid(out * Complex(0.25));
}

inline BellDiagonal evolve_random_field(const BellDiagonal& r0, double gt) {
  require_physical(r0);
  const double c = std::cos(2.0 * gt);
  const double c2 = c * c;
  return BellDiagonal{r0.r11 * c2, r0.r22, r0.r33 * c2};
}

inline BellDiagonal evolve(const BellDiagonal& r0, double t, const ChannelParams& params) {
  return std::visit(
      [&](const auto& p) -> BellDiagonal {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PhaseFlipParams>) {
          return evolve_phase_flip(r0, t, p);
        } else {
          p.validate();
          return evolve_random_field(r0, t);
        }
      },
      params);
}

// R_ii(0) = +-1 and R_jj(0) = -+R_kk(0) for the two decaying components
// i, j and the constant component k.
inline bool freezing_condition(const BellDiagonal& r0, std::size_t constant) {
  constexpr double tol = 1e-12;
  const std::size_t d1 = constant == 0 ? 1 : 0;
  const std::size_t d2 = constant == 2 ? 1 : 2;
  auto holds = [&](std::size_t unit, std::size_t other) {
    return std::abs(std::abs(r0[unit]) - 1.0) <= tol &&
           std::abs(r0[other] + r0[unit] * r0[constant]) <= tol;
  };
  return holds(d1, d2) || holds(d2, d1);
}

inline bool freezing_condition(const BellDiagonal& r0, const ChannelParams& params) {
  return freezing_condition(r0, constant_index(params));
}

// First nu at which f^2(nu) = level, found by bisection on
// [0, first zero of f], where f^2 falls monotonically from 1 to 0.
inline double phase_flip_level_time(double level, const PhaseFlipParams& p) {
  if (!(level > 0.0) || level > 1.0) {
    throw Error(ErrorKind::InvalidState, "f^2 level must lie in (0, 1]");
  }
  const double mu = p.mu();
  double lo = 0.0;
  double hi = (std::numbers::pi - std::atan(mu)) / mu;
  auto g = [&](double nu) {
    const double f = phase_flip_f(nu, p);
    return f * f - level;
  };
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// g t* = arccos(sqrt|R_const|) / 2: where cos^2(2 g t) first reaches |R_const|.
inline double random_field_freezing_end(double r_const) {
  return 0.5 * std::acos(std::sqrt(std::abs(r_const)));
}

enum class ModulusRank { Intermediate, Maximum };

namespace detail {

inline constexpr double kChangeTimeTol = 1e-10;

inline std::size_t rank_index(const BellDiagonal& r, ModulusRank rank) noexcept {
  const SortedModuli m = sort_moduli(r);
  return rank == ModulusRank::Intermediate ? m.idx_int : m.idx_max;
}

// True when the modulus at `rank` ties with a neighbour, so its index is
// only fixed by the tie-break.
inline bool rank_tied(const BellDiagonal& r, ModulusRank rank) noexcept {
  constexpr double tol = 1e-12;
  const SortedModuli m = sort_moduli(r);
  const bool top = std::abs(m.r_max - m.r_int) <= tol;
  return rank == ModulusRank::Maximum ? top : top || std::abs(m.r_int - m.r_min) <= tol;
}

}  // namespace detail

// Times where the component holding the given modulus rank switches,
// located on `times` and refined by bisection to 1e-10. When the initial
// state has a tie at that rank, the starting index is read just after the
// first grid time, so the tie resolving is not reported as a kink.
inline std::vector<double> detect_rank_changes(const std::function<BellDiagonal(double)>& state_at,
                                               std::span<const double> times, ModulusRank rank) {
  std::vector<double> out;
  if (times.size() < 2) return out;
  const BellDiagonal start = state_at(times[0]);
  std::size_t prev = detail::rank_index(start, rank);
  if (detail::rank_tied(start, rank)) {
    prev = detail::rank_index(state_at(times[0] + 1e-3 * (times[1] - times[0])), rank);
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    const std::size_t cur = detail::rank_index(state_at(times[k]), rank);
    if (cur == prev) continue;
    double lo = times[k - 1];
    double hi = times[k];
    while (hi - lo > detail::kChangeTimeTol) {
      const double mid = 0.5 * (lo + hi);
      (detail::rank_index(state_at(mid), rank) == prev ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
    prev = cur;
  }
  return out;
}

inline std::vector<double> uniform_grid(double t_max, std::size_t steps) {
  if (steps < 2) throw Error(ErrorKind::InvalidState, "a time grid needs at least 2 points");
  if (!(t_max > 0.0)) throw Error(ErrorKind::InvalidState, "time window must be positive");
  std::vector<double> t(steps);
  for (std::size_t i = 0; i < steps; ++i) t[i] = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
  return t;
}

// Sudden changes of the trace-distance discord on [0, t_max]: switches of
// the component holding the intermediate modulus. Empty when the ordering
// never changes.
inline std::vector<double> sudden_change_times(const BellDiagonal& r0, const ChannelParams& params,
                                               double t_max, std::size_t steps = 2000) {
  require_physical(r0);
  const std::vector<double> grid = uniform_grid(t_max, steps);
  return detect_rank_changes([&](double t) { return evolve(r0, t, params); }, grid,
                             ModulusRank::Intermediate);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<BellDiagonal> states;
  std::vector<CorrelationRecord> td_records;
  std::vector<CorrelationRecord> ent_records;
  std::vector<double> sudden_changes;     // switches of R_int (discords)
  std::vector<double> classical_changes;  // switches of R_max (classical correlations)
};

inline Trajectory trajectory(const BellDiagonal& r0, const ChannelParams& params, double t_max,
                             std::size_t steps) {
  require_physical(r0);
  std::visit([](const auto& p) { p.validate(); }, params);
  Trajectory out;
  out.times = uniform_grid(t_max, steps);
  out.states.reserve(steps);
  out.td_records.reserve(steps);
  out.ent_records.reserve(steps);
  for (double t : out.times) {
    const BellDiagonal r = evolve(r0, t, params);
    out.states.push_back(r);
    out.td_records.push_back(correlations_td(r));
    out.ent_records.push_back(correlations_ent(r));
  }
  auto state_at = [&](double t) { return evolve(r0, t, params); };
  out.sudden_changes = detect_rank_changes(state_at, out.times, ModulusRank::Intermediate);
  out.classical_changes = detect_rank_changes(state_at, out.times, ModulusRank::Maximum);
  return out;
}

struct FreezingScanEntry {
  double lambda1p = 1.0;
  BellDiagonal initial;
  double plateau = 0.0;                     // D_TD at t = 0, |R22(0)| / 2
  double closed_form_change = 0.0;          // arccos(sqrt|R22(0)|) / 2
  std::optional<double> detected_change;    // first detected sudden change, if any
  Trajectory trajectory;
};

// Initial states lambda1+ = L, lambda1- = 1 - L, lambda2+- = 0, i.e.
// R11 = R22 = 2L - 1, R33 = -1, evolved under random external fields.
inline std::vector<FreezingScanEntry> freezing_scaling_scan(std::span<const double> lambda1p_values,
                                                            double gt_max, std::size_t steps) {
  std::vector<FreezingScanEntry> out;
  for (double l : lambda1p_values) {
    if (!(l > 0.5) || l > 1.0) {
      throw Error(ErrorKind::InvalidSpectrum,
                  "lambda1+ must lie in (1/2, 1], got " + std::to_string(l));
    }
    FreezingScanEntry e;
    e.lambda1p = l;
    e.initial = bd_from_spectrum(BellSpectrum{l, 1.0 - l, 0.0, 0.0});
    e.plateau = td_discord(e.initial);
    e.closed_form_change = random_field_freezing_end(e.initial.r22);
    e.trajectory = trajectory(e.initial, RandomFieldParams{}, gt_max, steps);
    if (!e.trajectory.sudden_changes.empty()) e.detected_change = e.trajectory.sudden_changes.front();
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace bdcorr
