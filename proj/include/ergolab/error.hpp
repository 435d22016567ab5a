#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergolab {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid configuration: grid sizes, dimension mismatches, insufficient padding.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

/// Argument outside the mathematical domain of an operation (p < 1, delta > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// A frequency whose coboundary denominator e^{2 pi i delta k.s} - 1 is below the floor.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, std::vector<int> frequency)
      : Error(what), frequency_(std::move(frequency)) {}
  const char* kind() const noexcept override { return "resonance"; }
  const std::vector<int>& frequency() const noexcept { return frequency_; }

 private:
  std::vector<int> frequency_;
};

/// Quadrature did not settle before the panel cap; carries the last two iterates.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> last,
                   std::complex<double> previous)
      : Error(what), last_(last), previous_(previous) {}
  const char* kind() const noexcept override { return "convergence"; }
  std::complex<double> last() const noexcept { return last_; }
  std::complex<double> previous() const noexcept { return previous_; }

 private:
  std::complex<double> last_;
  std::complex<double> previous_;
};

/// Malformed input text (CSV, JSON); line is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  const char* kind() const noexcept override { return "parse"; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ergolab
