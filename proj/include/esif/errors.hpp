#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esif {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand shapes are incompatible with the requested operation.
class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// A leading minor failed to be positive definite during factorization.
class NotPositiveDefinite : public Error {
  public:
    NotPositiveDefinite(const std::string& what, std::size_t pivot)
        : Error(what + " (pivot " + std::to_string(pivot) + ")"),
          pivot_(pivot) {}

    /// Zero-based index of the offending pivot.
    std::size_t pivot() const { return pivot_; }

  private:
    std::size_t pivot_;
};

/// An input expected to have orthonormal columns does not.
class NotOrthonormal : public Error {
  public:
    explicit NotOrthonormal(const std::string& what) : Error(what) {}
};

/// An iterative kernel failed to converge within its iteration cap.
class NoConvergence : public Error {
  public:
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

/// Intermediate values grew past what any positive definite input can
/// produce (overflow-scale or non-finite); continuing would only turn the
/// garbage into a misleading failure further downstream.
class NumericalBreakdown : public Error {
  public:
    explicit NumericalBreakdown(const std::string& what) : Error(what) {}
};

/// A requested truncation rank is invalid for the operand.
class RankTooLarge : public Error {
  public:
    explicit RankTooLarge(const std::string& what) : Error(what) {}
};

/// Malformed configuration (CLI arguments, sweep files, problem specs).
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A diagnostic routine was asked to densify something beyond its size cap.
class SizeCapExceeded : public Error {
  public:
    explicit SizeCapExceeded(const std::string& what) : Error(what) {}
};

/// Malformed external matrix file; carries the offending line number.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// A matrix declared or required to be symmetric is not.
class NotSymmetric : public Error {
  public:
    explicit NotSymmetric(const std::string& what) : Error(what) {}
};

/// A file could not be opened or written.
class FileFormatError : public Error {
  public:
    explicit FileFormatError(const std::string& what) : Error(what) {}
};

} // namespace esif
