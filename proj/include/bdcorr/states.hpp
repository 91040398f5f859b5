#pragma once

// Bell diagonal two-qubit states, their Bell-basis spectra, single-qubit
// Bloch states and product states, and a seeded sampler of physical Bell
// diagonal states.
//
// Conventions: computational ordering |00>, |01>, |10>, |11>, with |0> the
// +1 eigenvector of sigma_z. Bell basis
//   |1+-> = (|01> +- |10>)/sqrt2,   |2+-> = (|00> +- |11>)/sqrt2.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bdcorr/error.hpp"
#include "bdcorr/matcore.hpp"

namespace bdcorr {

inline constexpr double kPhysicalTol = 1e-12;

struct BellDiagonal {
  double r11 = 0.0;
  double r22 = 0.0;
  double r33 = 0.0;

  // 0-based component access: 0 -> R11, 1 -> R22, 2 -> R33.
  double operator[](std::size_t i) const noexcept { return i == 0 ? r11 : (i == 1 ? r22 : r33); }
  double& operator[](std::size_t i) noexcept { return i == 0 ? r11 : (i == 1 ? r22 : r33); }

  friend bool operator==(const BellDiagonal&, const BellDiagonal&) = default;
};

// Weights on |1+>, |1->, |2+>, |2->.
struct BellSpectrum {
  double l1p = 0.25;
  double l1m = 0.25;
  double l2p = 0.25;
  double l2m = 0.25;

  std::array<double, 4> as_array() const noexcept { return {l1p, l1m, l2p, l2m}; }
  double sum() const noexcept { return l1p + l1m + l2p + l2m; }
};

struct BlochQubit {
  std::array<double, 3> v{};

  double norm() const noexcept { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
};

struct ProductState {
  BlochQubit a;
  BlochQubit b;
};

inline BellSpectrum bd_spectrum(const BellDiagonal& r) noexcept {
  return BellSpectrum{
      (1.0 + r.r11 + r.r22 - r.r33) / 4.0,
      (1.0 - r.r11 - r.r22 - r.r33) / 4.0,
      (1.0 + r.r11 - r.r22 + r.r33) / 4.0,
      (1.0 - r.r11 + r.r22 + r.r33) / 4.0,
  };
}

inline bool bd_validate(const BellDiagonal& r) noexcept {
  for (double l : bd_spectrum(r).as_array())
    if (l < -kPhysicalTol) return false;
  return true;
}

inline void require_physical(const BellDiagonal& r) {
  const auto l = bd_spectrum(r).as_array();
  static constexpr std::array<const char*, 4> names = {"lambda1+", "lambda1-", "lambda2+",
                                                       "lambda2-"};
  for (std::size_t i = 0; i < 4; ++i) {
    if (l[i] < -kPhysicalTol) {
      throw Error(ErrorKind::InvalidState, std::string("Bell eigenvalue ") + names[i] + " = " +
                                               std::to_string(l[i]) + " is negative");
    }
  }
}

inline BellDiagonal bd_from_spectrum(const BellSpectrum& s) {
  for (double l : s.as_array()) {
    if (l < -kPhysicalTol || l > 1.0 + kPhysicalTol) {
      throw Error(ErrorKind::InvalidSpectrum, "Bell eigenvalue " + std::to_string(l) +
                                                  " outside [0, 1]");
    }
  }
  if (std::abs(s.sum() - 1.0) > kPhysicalTol) {
    throw Error(ErrorKind::InvalidSpectrum,
                "Bell eigenvalues sum to " + std::to_string(s.sum()) + ", expected 1");
  }
  return BellDiagonal{-1.0 + 2.0 * (s.l1p + s.l2p), -1.0 + 2.0 * (s.l1p + s.l2m),
                      -1.0 + 2.0 * (s.l2p + s.l2m)};
}

// Bell basis vectors in computational coordinates, ordered as BellSpectrum.
inline std::array<std::array<Complex, 4>, 4> bell_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{
      {0.0, h, h, 0.0},
      {0.0, h, -h, 0.0},
      {h, 0.0, 0.0, h},
      {h, 0.0, 0.0, -h},
  }};
}

// sigma_i (x) sigma_i for i = 1, 2, 3.
inline ComplexMatrix correlation_operator(int i) { return kron(pauli(i), pauli(i)); }

inline DensityMatrix bd_to_matrix(const BellDiagonal& r) {
  require_physical(r);
  ComplexMatrix m = ComplexMatrix::identity(4);
  for (int i = 1; i <= 3; ++i) m += correlation_operator(i) * Complex(r[static_cast<std::size_t>(i - 1)]);
  return DensityMatrix::assume_valid(m * Complex(0.25));
}

inline ComplexMatrix bloch_to_matrix(const BlochQubit& q) {
  ComplexMatrix m = pauli(0);
  for (int i = 1; i <= 3; ++i) m += pauli(i) * Complex(q.v[static_cast<std::size_t>(i - 1)]);
  return m * Complex(0.5);
}

inline void require_bloch(const BlochQubit& q) {
  if (q.norm() > 1.0 + kPhysicalTol) {
    throw Error(ErrorKind::InvalidBloch,
                "Bloch vector norm " + std::to_string(q.norm()) + " exceeds 1");
  }
}

inline DensityMatrix product_to_matrix(const ProductState& p) {
  require_bloch(p.a);
  require_bloch(p.b);
  return DensityMatrix::assume_valid(kron(bloch_to_matrix(p.a), bloch_to_matrix(p.b)));
}

inline BellDiagonal extract_r(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw Error(ErrorKind::DimensionMismatch, "correlation coefficients need a two-qubit state");
  }
  BellDiagonal r;
  for (int i = 1; i <= 3; ++i)
    r[static_cast<std::size_t>(i - 1)] = (rho.matrix() * correlation_operator(i)).trace().real();
  return r;
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; platform independent,
// unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& gen) noexcept {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

// Rejection sampler: uniform in [-1, 1]^3, kept when physical. This is
// exactly uniform on the Bell tetrahedron.
class BellDiagonalSampler {
 public:
  explicit BellDiagonalSampler(std::uint64_t seed, std::uint64_t stream = 0)
      : gen_(detail::make_stream(seed, stream)) {}

  BellDiagonal operator()() {
    for (;;) {
      BellDiagonal r{draw(), draw(), draw()};
      ++proposals_;
      if (bd_validate(r)) {
        ++accepted_;
        return r;
      }
    }
  }

  std::uint64_t proposals() const noexcept { return proposals_; }
  std::uint64_t accepted() const noexcept { return accepted_; }

 private:
  double draw() { return 2.0 * detail::unit_uniform(gen_) - 1.0; }

  std::mt19937_64 gen_;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;
};

// Werner line R = (r, -r, r), r in [0, 1].
inline BellDiagonal werner(double r) noexcept { return BellDiagonal{r, -r, r}; }

// Rank-2 line R = (c, -c, 1), c in [0, 1].
inline BellDiagonal rank2(double c) noexcept { return BellDiagonal{c, -c, 1.0}; }

inline std::vector<BellDiagonal> sample_bd(std::size_t count, std::uint64_t seed) {
  BellDiagonalSampler sampler(seed);
  std::vector<BellDiagonal> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler());
  return out;
}

}  // namespace bdcorr
