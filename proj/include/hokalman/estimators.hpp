// Order estimators: Hankel rank sweeps (Ho-Kalman), AIC over least-squares
// AR fits, and lag-covariance determinants.
#pragma once

#include "hokalman/rank.hpp"
#include "hokalman/signal.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hokalman {

struct SweepPoint {
  std::size_t n = 0;
  std::size_t rank = 0;
  Real decision_gap = 0;
  Real condition = 0;
};

/// Rank of the n x n responses matrix as a function of n.
struct RankSweep {
  std::vector<SweepPoint> points;
};

enum class EstimatorMethod { hokalman_rank, aic, covariance_determinant };

std::string to_string(EstimatorMethod method);
EstimatorMethod parse_method(const std::string& name);

struct OrderEstimate {
  /// nullopt means inconclusive.
  std::optional<std::size_t> order;
  EstimatorMethod method = EstimatorMethod::hokalman_rank;
  std::string diagnostics;

  bool conclusive() const { return order.has_value(); }
  /// "order=<k>" or "order=inconclusive".
  std::string headline() const;
};

struct AicEntry {
  std::size_t p = 0;
  Real rss = 0;
  Real aic = 0;
};

struct AicReport {
  std::vector<AicEntry> per_order;
  std::size_t selected = 0;
};

struct CovDetEntry {
  std::size_t m = 0;
  Real determinant = 0;
};

struct CovDetReport {
  std::vector<CovDetEntry> per_order;
};

struct ArFit {
  std::vector<Real> coefficients;
  Real rss = 0;
  /// Number of residuals (signal length - p).
  std::size_t residual_count = 0;
  bool rank_deficient = false;
};

/// Ranks of the n x n Hankel matrices for n = n_min..n_max.
RankSweep rank_sweep(const Signal& signal, std::size_t n_min, std::size_t n_max,
                     const RankPolicy& policy = RankPolicy::default_policy());

/// Same sweep, but with the rank taken as the row-echelon pivot count at the
/// given relative pivot tolerance. Gap and condition come from the spectrum.
RankSweep echelon_sweep(const Signal& signal, std::size_t n_min, std::size_t n_max,
                        const Real& pivot_tolerance);

/// Smallest n from which every later point has the final rank; nullopt for
/// an empty sweep.
std::optional<std::size_t> plateau_onset(const RankSweep& sweep);

struct HoKalmanResult {
  OrderEstimate estimate;
  RankSweep sweep;
};

/// Sweeps n = 2..n_max and reports the final rank once the last
/// `plateau_len` ranks agree (and are positive); inconclusive otherwise.
HoKalmanResult hokalman_order(const Signal& signal, std::size_t n_max,
                              const RankPolicy& policy = RankPolicy::default_policy(),
                              std::size_t plateau_len = 3);

/// Least squares for y[n] = sum_{i=1..p} a_i y[n-i], n = p..L-1, by a
/// complete orthogonal decomposition (minimum-norm when rank deficient).
ArFit ar_fit(const Signal& signal, std::size_t p);

/// Same fit over the targets n = first_target..L-1 (first_target >= p).
ArFit ar_fit(const Signal& signal, std::size_t p, std::size_t first_target);

struct AicResult {
  OrderEstimate estimate;
  AicReport report;
};

/// AIC(p) = K ln(rss / K) + 2p with rss floored at 1e-300. Every order is
/// fitted over the same targets n = p_max..L-1, so K = L - p_max throughout.
AicResult aic_order(const Signal& signal, std::size_t p_max);

/// det(C_m) for C_m = (1/K) sum_n phi_n phi_n^T, phi_n = (y[n], ..., y[n-m]).
CovDetReport covariance_determinants(const Signal& signal, std::size_t m_min, std::size_t m_max);

/// Order m at the first collapse |det C_m| / |det C_{m-1}| <= collapse_ratio.
OrderEstimate covdet_order(const CovDetReport& report, const Real& collapse_ratio = Real(1e-6));

}  // namespace hokalman
