// Working-precision scalar and dense matrix aliases.
//
// Hankel matrices built from sums of slowly decaying modes are severely
// ill-conditioned (cond grows by two to three decades per added row), so
// every numeric path in the library runs in IEEE binary128.
#pragma once

#include <boost/multiprecision/float128.hpp>

#include <limits>
#include <string>

namespace hokalman {

using Real = boost::multiprecision::float128;

/// Unit roundoff of the working type (2^-112).
inline Real machine_epsilon() { return std::numeric_limits<Real>::epsilon(); }

inline Real infinity() { return std::numeric_limits<Real>::infinity(); }

/// Decimal text with enough digits to round-trip a Real exactly.
std::string format_real(const Real& value);

/// Parses decimal text (including "inf", "-inf", "nan") into a Real.
/// Throws std::invalid_argument on malformed input.
Real parse_real(const std::string& text);

}  // namespace hokalman

#include <Eigen/Core>

namespace Eigen {

template <>
struct NumTraits<hokalman::Real> : GenericNumTraits<hokalman::Real> {
  using Real = hokalman::Real;
  using NonInteger = hokalman::Real;
  using Nested = hokalman::Real;
  using Literal = hokalman::Real;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };

  static inline Real dummy_precision() { return Real(1e-30); }
  static inline int digits10() { return std::numeric_limits<Real>::digits10; }
};

}  // namespace Eigen

#include <Eigen/Dense>

namespace hokalman {

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

}  // namespace hokalman
