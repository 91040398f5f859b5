#pragma once

// Trace-distance correlation hierarchy of Bell diagonal states: discord
// (from the intermediate modulus), classical correlations (from the maximal
// modulus), total correlations (one-parameter product-state minimization)
// and the fixed-reference baseline measured from the marginal product I/4.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "bdcorr/matcore.hpp"
#include "bdcorr/nelder_mead.hpp"
#include "bdcorr/states.hpp"

namespace bdcorr {

// Moduli |R_ii| sorted ascending. Indices are 0-based components of
// BellDiagonal. Ties go to the lowest original index first for idx_max,
// then for idx_int.
struct SortedModuli {
  double r_min = 0.0;
  double r_int = 0.0;
  double r_max = 0.0;
  std::size_t idx_min = 2;
  std::size_t idx_int = 1;
  std::size_t idx_max = 0;
};

inline SortedModuli sort_moduli(const BellDiagonal& r) noexcept {
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(r[a]) > std::abs(r[b]);
  });
  return SortedModuli{std::abs(r[order[2]]), std::abs(r[order[1]]), std::abs(r[order[0]]),
                      order[2],              order[1],              order[0]};
}

enum class Metric { TraceDistance, RelativeEntropy };

inline const char* to_string(Metric m) {
  return m == Metric::TraceDistance ? "trace-distance" : "relative-entropy";
}

struct CorrelationRecord {
  Metric metric = Metric::TraceDistance;
  double quantum = 0.0;
  double classical = 0.0;
  double total = 0.0;
  BellDiagonal closest_classical;
  ProductState classical_product;  // closest product state to closest_classical
  ProductState total_product;      // closest product state to the state itself
};

inline double td_discord(const BellDiagonal& r) {
  require_physical(r);
  return 0.5 * sort_moduli(r).r_int;
}

inline BellDiagonal closest_classical(const BellDiagonal& r) {
  require_physical(r);
  const SortedModuli m = sort_moduli(r);
  BellDiagonal chi;
  chi[m.idx_max] = r[m.idx_max];
  return chi;
}

inline double td_classical(const BellDiagonal& r) {
  require_physical(r);
  return std::sqrt(1.0 + sort_moduli(r).r_max) - 1.0;
}

namespace detail {

inline double sign_of(double x) noexcept { return x < 0.0 ? -1.0 : 1.0; }

// Product state with Bloch components only along axis k:
// a_k = s * x, b_k = x, s the sign of R_kk.
inline ProductState axis_product(std::size_t k, double s, double x) noexcept {
  ProductState p;
  p.a.v[k] = s * x;
  p.b.v[k] = x;
  return p;
}

}  // namespace detail

inline ProductState closest_product_to_classical(const BellDiagonal& r) {
  require_physical(r);
  const SortedModuli m = sort_moduli(r);
  const double x = std::sqrt(1.0 + m.r_max) - 1.0;
  return detail::axis_product(m.idx_max, detail::sign_of(r[m.idx_max]), x);
}

// Trace distance between r and the axis product state with parameter a_k,
// written as one eighth of four absolute values (the eigenvalues of
// 4 (rho - pi)). The square root carries (R_ii - s R_jj)^2; with a plain
// (R_ii - R_jj)^2 the expression is only right for R_kk > 0. For r = 0 the
// sign s is taken as +1, which still gives the exact distance.
inline double td_total_objective(const BellDiagonal& r, double a_k) noexcept {
  const SortedModuli m = sort_moduli(r);
  const double rkk = r[m.idx_max];
  const double rii = r[m.idx_min];
  const double rjj = r[m.idx_int];
  const double s = detail::sign_of(rkk);
  const double x2 = a_k * a_k;
  const double delta = rii - s * rjj;
  const double root = std::sqrt(4.0 * x2 + delta * delta);
  return (std::abs(x2 + rii + s * (rjj - rkk)) + std::abs(x2 - rii + s * (-rjj - rkk)) +
          std::abs(x2 - s * rkk + s * root) + std::abs(-s * x2 + rkk + root)) /
         8.0;
}

struct TotalCorrelation {
  double value = 0.0;
  double a_k = 0.0;  // optimal |a_k| within the axis family
  ProductState witness;
  bool grid_refined = false;  // true when the candidate set was beaten by the grid check
  bool off_axis = false;      // true when the witness left the axis family
  double axis_value = 0.0;    // minimum within the axis family alone
};

namespace detail {

inline constexpr int kTotalGridPoints = 10000;
inline constexpr double kTotalGridSlack = 1e-9;

// Real roots of a x^2 + b x + c = 0 (a may vanish).
inline std::vector<double> real_roots(double a, double b, double c) {
  std::vector<double> out;
  if (std::abs(a) < 1e-300) {
    if (std::abs(b) > 1e-300) out.push_back(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  // Numerically stable pair.
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  out.push_back(q / a);
  if (std::abs(q) > 1e-300) out.push_back(c / q);
  return out;
}

// Candidate values of X = a_k^2 that zero one of the four terms, plus the
// endpoints. The square-root terms both reduce to
//   X^2 - (2 s R_kk + 4) X + R_kk^2 - (R_ii - s R_jj)^2 = 0.
inline std::vector<double> total_candidates(const BellDiagonal& r) {
  const SortedModuli m = sort_moduli(r);
  const double rkk = r[m.idx_max];
  const double rii = r[m.idx_min];
  const double rjj = r[m.idx_int];
  const double s = sign_of(rkk);
  std::vector<double> xs{0.0, 1.0, -rii - s * (rjj - rkk), rii + s * (rjj + rkk)};
  const double delta = rii - s * rjj;
  for (double x : real_roots(1.0, -(2.0 * s * rkk + 4.0), rkk * rkk - delta * delta)) xs.push_back(x);
  std::vector<double> out;
  for (double x2 : xs) {
    if (x2 >= -1e-14 && x2 <= 1.0 + 1e-14) out.push_back(std::sqrt(std::clamp(x2, 0.0, 1.0)));
  }
  return out;
}

inline double golden_section(const BellDiagonal& r, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = td_total_objective(r, c), fd = td_total_objective(r, d);
  while (b - a > 1e-13) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = td_total_objective(r, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = td_total_objective(r, d);
    }
  }
  return 0.5 * (a + b);
}

// Sum of |y| over the roots of y^4 + p y^2 + q y + c, all roots real.
// Uses the resolvent cubic z^3 + 2p z^2 + (p^2 - 4c) z - q^2, whose roots
// are the squares of pairwise root sums.
inline double abs_root_sum(double p, double q, double c) noexcept {
  const double a = 2.0 * p, b = p * p - 4.0 * c;
  const double qq = (a * a - 3.0 * b) / 9.0;
  const double rr = (2.0 * a * a * a - 9.0 * a * b - 27.0 * q * q) / 54.0;
  std::array<double, 3> z{};
  if (qq <= 0.0) {
    z.fill(-a / 3.0);
  } else {
    const double sq = std::sqrt(qq);
    const double th = std::acos(std::clamp(rr / (sq * sq * sq), -1.0, 1.0));
    for (int k = 0; k < 3; ++k) z[k] = -2.0 * sq * std::cos((th + 2.0 * std::numbers::pi * k) / 3.0) - a / 3.0;
  }
  const double s1 = std::sqrt(std::max(z[0], 0.0)), s2 = std::sqrt(std::max(z[1], 0.0));
  const double s3 = (q > 0.0 ? -1.0 : 1.0) * std::sqrt(std::max(z[2], 0.0));
  return 0.5 * (std::abs(s1 + s2 + s3) + std::abs(s1 - s2 - s3) + std::abs(-s1 + s2 - s3) +
                std::abs(-s1 - s2 + s3));
}

// Trace distance between a Bell diagonal state and a product state, from
// the characteristic polynomial of the (traceless) difference.
inline double bd_product_distance(const BellDiagonal& r, const ProductState& p) noexcept {
  using C = std::complex<double>;
  auto qubit = [](const BlochQubit& q) {
    return std::array<C, 4>{C(0.5 * (1.0 + q.v[2])), C(0.5 * q.v[0], -0.5 * q.v[1]),
                            C(0.5 * q.v[0], 0.5 * q.v[1]), C(0.5 * (1.0 - q.v[2]))};
  };
  const auto qa = qubit(p.a), qb = qubit(p.b);
  std::array<C, 16> m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m[(2 * i + k) * 4 + 2 * j + l] = -qa[2 * i + j] * qb[2 * k + l];
  m[0] += (1.0 + r.r33) / 4.0;
  m[5] += (1.0 - r.r33) / 4.0;
  m[10] += (1.0 - r.r33) / 4.0;
  m[15] += (1.0 + r.r33) / 4.0;
  m[3] += (r.r11 - r.r22) / 4.0;
  m[12] += (r.r11 - r.r22) / 4.0;
  m[6] += (r.r11 + r.r22) / 4.0;
  m[9] += (r.r11 + r.r22) / 4.0;

  std::array<C, 16> m2{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) m2[i * 4 + j] += m[i * 4 + k] * m[k * 4 + j];
  double p2 = 0.0, p3 = 0.0, p4 = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      p2 += std::real(m[i * 4 + k] * m[k * 4 + i]);
      p3 += std::real(m2[i * 4 + k] * m[k * 4 + i]);
      p4 += std::norm(m2[i * 4 + k]);
    }
  }
  return 0.5 * abs_root_sum(-p2 / 2.0, -p3 / 3.0, (p2 * p2 - 2.0 * p4) / 8.0);
}

// Product states a = S b with S = diag(sign R_ii). For strongly entangled
// states the closest product state lies in this family but off the axis,
// e.g. r = (0.9, -0.8, 0.88) has b in the 1-2 plane.
inline ProductState mirrored_product(const BellDiagonal& r, std::span<const double> b) noexcept {
  const double n = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  const double scale = n > 1.0 ? 1.0 / n : 1.0;
  ProductState p;
  for (std::size_t i = 0; i < 3; ++i) {
    p.b.v[i] = scale * b[i];
    p.a.v[i] = sign_of(r[i]) * p.b.v[i];
  }
  return p;
}

struct MirroredSearch {
  double value;
  ProductState witness;
};

inline MirroredSearch mirrored_search(const BellDiagonal& r, const ProductState& axis_witness) {
  auto objective = [&](std::span<const double> b) { return bd_product_distance(r, mirrored_product(r, b)); };
  OptimizerConfig cfg;
  cfg.f_tol = 1e-14;
  cfg.x_tol = 1e-12;
  std::vector<std::array<double, 3>> starts{axis_witness.b.v};
  for (std::size_t k = 0; k < 3; ++k) {
    std::array<double, 3> s{0.3, 0.3, 0.3};
    s[k] = 0.6;
    starts.push_back(s);
  }
  MirroredSearch best{std::numeric_limits<double>::infinity(), {}};
  for (const auto& s : starts) {
    const MinimizeResult res = nelder_mead_restarted(objective, std::span<const double>(s), cfg, 0.2);
    if (res.min < best.value) best = {res.min, mirrored_product(r, res.argmin)};
  }
  // The quartic loses ~1e-9 near repeated roots, which is where the optimum
  // sits; report the eigenvalue-based distance of the witness instead.
  best.value = 0.5 * trace_norm_unchecked(bd_to_matrix(r).matrix() -
                                          kron(bloch_to_matrix(best.witness.a), bloch_to_matrix(best.witness.b)));
  return best;
}

}  // namespace detail

inline TotalCorrelation td_total(const BellDiagonal& r) {
  require_physical(r);
  const SortedModuli m = sort_moduli(r);
  const double s = detail::sign_of(r[m.idx_max]);
  TotalCorrelation best;
  best.value = td_total_objective(r, 0.0);
  for (double x : detail::total_candidates(r)) {
    const double v = td_total_objective(r, x);
    if (v < best.value) {
      best.value = v;
      best.a_k = x;
    }
  }

  // Grid check of the candidate ansatz.
  double grid_min = best.value;
  double grid_x = best.a_k;
  for (int i = 0; i < detail::kTotalGridPoints; ++i) {
    const double x = static_cast<double>(i) / (detail::kTotalGridPoints - 1);
    const double v = td_total_objective(r, x);
    if (v < grid_min) {
      grid_min = v;
      grid_x = x;
    }
  }
  if (grid_min < best.value - detail::kTotalGridSlack) {
    const double h = 1.0 / (detail::kTotalGridPoints - 1);
    const double x = detail::golden_section(r, std::max(0.0, grid_x - h), std::min(1.0, grid_x + h));
    const double v = td_total_objective(r, x);
    best.a_k = v < grid_min ? x : grid_x;
    best.value = std::min(v, grid_min);
    best.grid_refined = true;
  }
  best.witness = detail::axis_product(m.idx_max, s, best.a_k);
  best.axis_value = best.value;

  // Off-axis witnesses only turn up for entangled states (largest eigenvalue > 1/2).
  const auto lam = bd_spectrum(r).as_array();
  if (*std::max_element(lam.begin(), lam.end()) > 0.5) {
    const detail::MirroredSearch off = detail::mirrored_search(r, best.witness);
    if (off.value < best.value - detail::kTotalGridSlack) {
      best.value = off.value;
      best.witness = off.witness;
      best.off_axis = true;
    }
  }
  return best;
}

inline double triangle_gap(const BellDiagonal& r) {
  return td_classical(r) + td_discord(r) - td_total(r).value;
}

struct MarginalBaseline {
  double c_prime = 0.0;  // distance of the closest classical state from I/4
  double t_prime = 0.0;  // distance of the state from I/4
};

namespace detail {

// Both states diagonal in the Bell basis; I/4 has all weights 1/4.
inline double distance_from_maximally_mixed(const BellDiagonal& r) noexcept {
  double s = 0.0;
  for (double l : bd_spectrum(r).as_array()) s += std::abs(l - 0.25);
  return 0.5 * s;
}

}  // namespace detail

inline MarginalBaseline marginal_baseline(const BellDiagonal& r) {
  require_physical(r);
  return MarginalBaseline{detail::distance_from_maximally_mixed(closest_classical(r)),
                          detail::distance_from_maximally_mixed(r)};
}

inline CorrelationRecord correlations_td(const BellDiagonal& r) {
  require_physical(r);
  const TotalCorrelation total = td_total(r);
  CorrelationRecord rec;
  rec.metric = Metric::TraceDistance;
  rec.quantum = td_discord(r);
  rec.classical = td_classical(r);
  rec.total = total.value;
  rec.closest_classical = closest_classical(r);
  rec.classical_product = closest_product_to_classical(r);
  rec.total_product = total.witness;
  return rec;
}

}  // namespace bdcorr
