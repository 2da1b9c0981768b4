#pragma once

#include <stdexcept>
#include <string>

namespace geowl {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cloud violates a structural invariant (fewer than two points,
/// non-finite coordinates, label count mismatch).
class InvalidCloud : public Error {
 public:
  using Error::Error;
};

/// All points coincide; unit rescaling is undefined.
class DegenerateCloud : public Error {
 public:
  using Error::Error;
};

/// The pruned permutation search exceeded its step budget.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A refinement hit its iteration cap before the partition stabilized.
/// Partition refinement terminates within the cell count, so this
/// indicates a bug rather than an expected runtime condition.
class NoStabilization : public Error {
 public:
  using Error::Error;
};

/// A mass function sums to zero over the coloring it is applied to.
class ZeroMass : public Error {
 public:
  using Error::Error;
};

/// A center-distance radicand fell below the numeric clamp band,
/// signalling inconsistent inputs.
class NegativeRadicand : public Error {
 public:
  using Error::Error;
};

/// Triangular encoding requested with two coinciding anchors.
class CoincidentAnchors : public Error {
 public:
  using Error::Error;
};

/// No coordinate assignment reproduces the given distance data.
class InconsistentDistances : public Error {
 public:
  using Error::Error;
};

/// SE(3) reconstruction of a non-planar cloud without a usable
/// orientation sign.
class MissingOrientation : public Error {
 public:
  using Error::Error;
};

/// A shell passed to cloud combination is not centered at the origin.
class NotCentered : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration (unknown key, out-of-range value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input text does not conform to the file grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line)
      : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace geowl
