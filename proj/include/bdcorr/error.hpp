#pragma once

#include <stdexcept>
#include <string>

namespace bdcorr {

enum class ErrorKind {
  NonHermitian,
  DimensionMismatch,
  InvalidState,
  InvalidSpectrum,
  InvalidBloch,
  UnsupportedRegime,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidSpectrum: return "InvalidSpectrum";
    case ErrorKind::InvalidBloch: return "InvalidBloch";
    case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
  }
  return "Unknown";
}

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bdcorr
