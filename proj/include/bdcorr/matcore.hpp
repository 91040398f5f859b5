#pragma once

// Small dense complex matrices (dimension 2 or 4) and the spectral
// quantities built on them: Hermitian eigendecomposition, trace norm,
// trace distance, partial trace and entropies (base 2).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bdcorr/error.hpp"

namespace bdcorr {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kSupportTol = 1e-12;

class ComplexMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  explicit ComplexMatrix(std::size_t dim = 4) : dim_(dim) {
    if (dim != 2 && dim != 4) {
      throw Error(ErrorKind::DimensionMismatch,
                  "matrix dimension must be 2 or 4, got " + std::to_string(dim));
    }
  }

  ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major) : ComplexMatrix(dim) {
    if (row_major.size() != dim * dim) {
      throw Error(ErrorKind::DimensionMismatch, "initializer does not match dimension");
    }
    std::size_t k = 0;
    for (const Complex& z : row_major) {
      (*this)(k / dim, k % dim) = z;
      ++k;
    }
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    ComplexMatrix m(values.size());
    std::size_t i = 0;
    for (double v : values) {
      m(i, i) = v;
      ++i;
    }
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * kMaxDim + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * kMaxDim + j];
  }

  Complex trace() const noexcept {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  // Largest entry of |M - M^dagger|.
  double hermiticity_defect() const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i; j < dim_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  bool is_hermitian(double tol = kHermitianTol) const noexcept {
    return hermiticity_defect() <= tol;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) (*this)(i, j) -= o(i, j);
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) noexcept {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) (*this)(i, j) *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same(b);
    ComplexMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex aik = a(i, k);
        for (std::size_t j = 0; j < a.dim_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  // Largest absolute entry difference.
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t j = 0; j < a.dim_; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
  }

 private:
  void check_same(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) {
      throw Error(ErrorKind::DimensionMismatch, "operands have dimensions " +
                                                    std::to_string(dim_) + " and " +
                                                    std::to_string(o.dim_));
    }
  }

  std::size_t dim_;
  std::array<Complex, kMaxDim * kMaxDim> data_{};
};

// Pauli matrix sigma_i for i = 0 (identity), 1 (x), 2 (y), 3 (z), in the
// ordering |0>, |1> with |0> the +1 eigenvector of sigma_z.
inline ComplexMatrix pauli(int i) {
  using namespace std::complex_literals;
  switch (i) {
    case 0: return ComplexMatrix(2, {1.0, 0.0, 0.0, 1.0});
    case 1: return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case 2: return ComplexMatrix(2, {0.0, -1i, 1i, 0.0});
    case 3: return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
    default: throw Error(ErrorKind::DimensionMismatch, "Pauli index must be in 0..3");
  }
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim() * b.dim();
  if (n > ComplexMatrix::kMaxDim) {
    throw Error(ErrorKind::DimensionMismatch, "tensor product exceeds dimension 4");
  }
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
  return out;
}

// Eigenvalues in ascending order.
struct Spectrum {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  double sum() const noexcept {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

struct EigenSystem {
  Spectrum spectrum;
  ComplexMatrix vectors;  // column i is the eigenvector of spectrum[i]
};

namespace detail {

inline constexpr double kJacobiOffDiagTol = 1e-14;
inline constexpr int kJacobiMaxSweeps = 64;

inline double off_diagonal_norm(const ComplexMatrix& a) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Cyclic complex Jacobi. Diagonalizes `a` in place; accumulates the
// rotations into `v` when provided.
inline void jacobi_diagonalize(ComplexMatrix& a, ComplexMatrix* v) noexcept {
  const std::size_t n = a.dim();
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < kJacobiOffDiagTol) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, q).
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = (*v)(k, p);
            const Complex vkq = (*v)(k, q);
            (*v)(k, p) = vkp * gpp + vkq * gqp;
            (*v)(k, q) = vkp * gpq + vkq * gqq;
          }
        }
      }
    }
  }
}

inline void require_hermitian(const ComplexMatrix& m) {
  const double defect = m.hermiticity_defect();
  if (defect > kHermitianTol) {
    throw Error(ErrorKind::NonHermitian,
                "hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
  }
}

// Unsorted eigenvalues without the Hermiticity check; hot path for the
// optimizers.
inline std::array<double, ComplexMatrix::kMaxDim> raw_eigenvalues(ComplexMatrix a) noexcept {
  jacobi_diagonalize(a, nullptr);
  std::array<double, ComplexMatrix::kMaxDim> out{};
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a(i, i).real();
  return out;
}

inline double trace_norm_unchecked(const ComplexMatrix& m) noexcept {
  const auto ev = raw_eigenvalues(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) s += std::abs(ev[i]);
  return s;
}

// -x log2 x with 0 log 0 = 0.
inline double entropy_term(double x) noexcept { return x > 0.0 ? -x * std::log2(x) : 0.0; }

}  // namespace detail

inline Spectrum eig_hermitian(const ComplexMatrix& m) {
  detail::require_hermitian(m);
  const auto raw = detail::raw_eigenvalues(m);
  Spectrum s;
  s.values.assign(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(m.dim()));
  std::sort(s.values.begin(), s.values.end());
  return s;
}

inline EigenSystem eigh(const ComplexMatrix& m) {
  detail::require_hermitian(m);
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(m.dim());
  detail::jacobi_diagonalize(a, &v);
  const std::size_t n = m.dim();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenSystem out{Spectrum{}, ComplexMatrix(n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.spectrum.values.push_back(a(order[c], order[c]).real());
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

inline double trace_norm(const ComplexMatrix& m) {
  detail::require_hermitian(m);
  return detail::trace_norm_unchecked(m);
}

// Hermitian, unit trace, numerically positive semidefinite.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    const double defect = mat_.hermiticity_defect();
    if (defect > kHermitianTol) {
      throw Error(ErrorKind::InvalidState, "density matrix is not Hermitian (defect " +
                                               std::to_string(defect) + ")");
    }
    const Complex tr = mat_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw Error(ErrorKind::InvalidState,
                  "density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    const auto ev = detail::raw_eigenvalues(mat_);
    for (std::size_t i = 0; i < mat_.dim(); ++i) {
      if (ev[i] < -kPsdTol) {
        throw Error(ErrorKind::InvalidState,
                    "density matrix has negative eigenvalue " + std::to_string(ev[i]));
      }
    }
  }

  // Skips validation; for matrices that are states by construction.
  static DensityMatrix assume_valid(ComplexMatrix m) { return DensityMatrix(std::move(m), Trusted{}); }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    return assume_valid(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
  }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix m, Trusted) : mat_(std::move(m)) {}

  ComplexMatrix mat_;
};

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "trace distance between states of different size");
  }
  return 0.5 * detail::trace_norm_unchecked(rho.matrix() - sigma.matrix());
}

enum class Subsystem { A, B };

inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (rho.dim() != 4) {
    throw Error(ErrorKind::DimensionMismatch, "partial trace needs a two-qubit state");
  }
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (keep == Subsystem::A) {
          out(i, j) += m(2 * i + k, 2 * j + k);
        } else {
          out(i, j) += m(2 * k + i, 2 * k + j);
        }
      }
  return DensityMatrix::assume_valid(out);
}

// Shannon entropy (bits) of eigenvalues, with roundoff negatives in
// [-1e-10, 0) treated as zero.
inline double spectral_entropy(const Spectrum& s) {
  double h = 0.0;
  for (double v : s.values) {
    if (v < -kPsdTol) {
      throw Error(ErrorKind::InvalidState, "negative eigenvalue " + std::to_string(v));
    }
    h += detail::entropy_term(std::max(v, 0.0));
  }
  return h;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return spectral_entropy(eig_hermitian(rho.matrix()));
}

// S(rho || sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "relative entropy between states of different size");
  }
  const EigenSystem es = eigh(sigma.matrix());
  const ComplexMatrix& v = es.vectors;
  const std::size_t n = rho.dim();
  double cross = 0.0;  // -Tr(rho log2 sigma)
  for (std::size_t c = 0; c < n; ++c) {
    Complex w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w += std::conj(v(i, c)) * rho.matrix()(i, j) * v(j, c);
    const double weight = w.real();
    const double mu = es.spectrum[c];
    if (mu < kSupportTol) {
      if (weight > kSupportTol) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross -= weight * std::log2(mu);
  }
  const double value = cross - von_neumann_entropy(rho);
  return value < 0.0 && value > -1e-12 ? 0.0 : value;
}

}  // namespace bdcorr
