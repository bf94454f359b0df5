#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

// Geometric or mathematical precondition failure. The CLI maps these to
// exit code 3.
struct GeomError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input point set does not affinely span the ambient space.
struct DegenerateInputError : GeomError {
  int affine_rank;
  DegenerateInputError(const std::string& msg, int rank)
      : GeomError(msg), affine_rank(rank) {}
};

struct UnboundedRegionError : GeomError {
  using GeomError::GeomError;
};

struct NotInteriorError : GeomError {
  double margin;  // worst halfspace slack at the offending point
  explicit NotInteriorError(const std::string& msg, double m = 0.0)
      : GeomError(msg), margin(m) {}
};

struct LpInfeasibleError : GeomError {
  using GeomError::GeomError;
};

struct LpUnboundedError : GeomError {
  using GeomError::GeomError;
};

// File or serialization failure. The CLI maps these to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mahler
