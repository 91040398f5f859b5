#pragma once

// Relative-entropy correlations of Bell diagonal states, in bits.

#include <algorithm>
#include <cmath>

#include "bdcorr/matcore.hpp"
#include "bdcorr/states.hpp"
#include "bdcorr/td_correlations.hpp"

namespace bdcorr {

// Mutual information 2 - S(rho).
inline double ent_total(const BellDiagonal& r) {
  require_physical(r);
  double t = 2.0;
  for (double l : bd_spectrum(r).as_array()) t -= detail::entropy_term(std::max(l, 0.0));
  return std::max(t, 0.0);
}

inline double ent_classical(const BellDiagonal& r) {
  require_physical(r);
  const double m = sort_moduli(r).r_max;
  auto term = [](double y) { return y > 0.0 ? 0.5 * y * std::log2(y) : 0.0; };
  return term(1.0 - m) + term(1.0 + m);
}

inline double ent_discord(const BellDiagonal& r) {
  const double d = ent_total(r) - ent_classical(r);
  return d < 0.0 && d >= -1e-12 ? 0.0 : d;
}

// The closest product state is the product of the (maximally mixed)
// marginals, so both product witnesses are the origin of the Bloch ball.
inline CorrelationRecord correlations_ent(const BellDiagonal& r) {
  CorrelationRecord rec;
  rec.metric = Metric::RelativeEntropy;
  rec.classical = ent_classical(r);
  rec.quantum = ent_discord(r);
  rec.total = rec.quantum + rec.classical;
  rec.closest_classical = closest_classical(r);
  return rec;
}

}  // namespace bdcorr
