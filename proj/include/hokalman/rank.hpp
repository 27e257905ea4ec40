// Numerical rank: singular spectra, tolerance policies and condition numbers,
// plus an exact rank oracle over the rationals.
#pragma once

#include "hokalman/rational.hpp"
#include "hokalman/real.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hokalman {

struct HankelMatrix;
struct AugmentedHankel;

/// Singular values sorted non-increasing; length min(rows, cols).
struct SingularSpectrum {
  std::vector<Real> values;
  std::size_t rows = 0;
  std::size_t cols = 0;

  Real largest() const { return values.empty() ? Real(0) : values.front(); }
  Real smallest() const { return values.empty() ? Real(0) : values.back(); }
};

enum class RankPolicyKind { relative_threshold, absolute_threshold, gap_ratio };

/// How a spectrum is turned into an integer rank.
///
///   relative_threshold(tau): count sigma_i > tau * sigma_max, tau in (0, 1)
///   absolute_threshold(tau): count sigma_i > tau, tau > 0
///   gap_ratio(r):            cut at the largest sigma_i / sigma_{i+1} if >= r > 1
///
/// The default policy is relative with tau = max(rows, cols) * eps * 64,
/// resolved against each matrix shape.
class RankPolicy {
 public:
  static RankPolicy default_policy() { return RankPolicy(RankPolicyKind::relative_threshold, std::nullopt); }
  static RankPolicy relative(const Real& tau);
  static RankPolicy absolute(const Real& tau);
  static RankPolicy gap(const Real& min_ratio = default_gap_ratio());

  static Real default_gap_ratio() { return Real(1000); }

  RankPolicyKind kind() const { return kind_; }
  /// Parameter, or nullopt for the shape-dependent default tolerance.
  const std::optional<Real>& value() const { return value_; }

  bool is_default() const { return kind_ == RankPolicyKind::relative_threshold && !value_; }

  /// e.g. "relative(default)", "absolute(1e-06)", "gap(1000)".
  std::string describe() const;

 private:
  RankPolicy(RankPolicyKind kind, std::optional<Real> value) : kind_(kind), value_(std::move(value)) {}

  RankPolicyKind kind_;
  std::optional<Real> value_;
};

/// max(rows, cols) * eps * 64, with eps of the working precision.
Real default_relative_tolerance(std::size_t rows, std::size_t cols);

/// Builds a policy from a CLI-style name ("relative", "absolute", "gap").
/// A missing value selects the default for that kind; "absolute" requires
/// one. Throws std::invalid_argument for unknown names or bad values.
RankPolicy parse_policy(const std::string& name, const std::optional<double>& value);

struct RankResult {
  std::size_t rank = 0;
  RankPolicy policy = RankPolicy::default_policy();
  SingularSpectrum spectrum;
  /// sigma_rank / sigma_{rank+1}; +inf when nothing lies below the cut.
  Real decision_gap = 0;
};

SingularSpectrum singular_values(const Matrix& matrix);
SingularSpectrum singular_values(const HankelMatrix& matrix);
SingularSpectrum singular_values(const AugmentedHankel& matrix);

RankResult numerical_rank(const SingularSpectrum& spectrum, const RankPolicy& policy);

/// Convenience: singular_values followed by numerical_rank.
RankResult matrix_rank(const Matrix& matrix, const RankPolicy& policy = RankPolicy::default_policy());

/// sigma_max / sigma_min; +inf when sigma_min is zero.
Real condition_number(const SingularSpectrum& spectrum);

/// Exact rank by fraction-free (Bareiss) elimination. Rows are first scaled
/// to integers by the lcm of their denominators; every later division is
/// exact.
std::size_t exact_rank_rational(const RationalMatrix& matrix);

}  // namespace hokalman
