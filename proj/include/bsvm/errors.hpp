#pragma once

#include <stdexcept>
#include <string>

namespace bsvm {

/// Root of the library's error hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unusable input: bad CSV schema, dimension mismatch,
/// single-class training sets, classes too small to stratify.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter combinations: non-positive gamma, empty grids,
/// bad tolerances.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Optimization-level failures.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// nu outside the feasible range for the given class balance.
class NuInfeasibleError : public SolverError {
 public:
  NuInfeasibleError(double nu, double bound)
      : SolverError("nu=" + std::to_string(nu) +
                    " is infeasible: nu must not exceed 2*min(n+,n-)/n = " +
                    std::to_string(bound)),
        nu(nu),
        bound(bound) {}

  double nu;
  double bound;
};

}  // namespace bsvm
