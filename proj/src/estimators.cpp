#include "hokalman/estimators.hpp"

#include "hokalman/hankel.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <sstream>
#include <stdexcept>

namespace hokalman {

namespace {

Real spectrum_gap(const SingularSpectrum& s, std::size_t rank) {
  const auto& v = s.values;
  if (rank >= v.size()) return infinity();
  if (rank == 0) return v.front() == 0 ? infinity() : Real(0);
  if (v[rank] == 0) return infinity();
  return v[rank - 1] / v[rank];
}

void require_sweep_length(const Signal& signal, std::size_t n_max) {
  const std::size_t needed = 2 * n_max - 1;
  if (signal.size() < needed)
    throw std::invalid_argument("rank sweep up to n=" + std::to_string(n_max) + " needs 2n-1 = " +
                                std::to_string(needed) + " samples, signal has " +
                                std::to_string(signal.size()));
}

std::string join_ranks(const RankSweep& sweep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sweep.points.size(); ++i) os << (i ? "," : "") << sweep.points[i].rank;
  return os.str();
}

}  // namespace

std::string to_string(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::hokalman_rank: return "hokalman";
    case EstimatorMethod::aic: return "aic";
    case EstimatorMethod::covariance_determinant: return "covdet";
  }
  return "unknown";
}

EstimatorMethod parse_method(const std::string& name) {
  if (name == "hokalman") return EstimatorMethod::hokalman_rank;
  if (name == "aic") return EstimatorMethod::aic;
  if (name == "covdet") return EstimatorMethod::covariance_determinant;
  throw std::invalid_argument("unknown method '" + name + "' (expected hokalman, aic or covdet)");
}

std::string OrderEstimate::headline() const {
  return order ? "order=" + std::to_string(*order) : std::string("order=inconclusive");
}

RankSweep rank_sweep(const Signal& signal, std::size_t n_min, std::size_t n_max,
                     const RankPolicy& policy) {
  if (n_min == 0 || n_max < n_min) throw std::invalid_argument("rank sweep needs 1 <= n_min <= n_max");
  require_sweep_length(signal, n_max);
  RankSweep sweep;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto spectrum = singular_values(build_hankel(signal, n));
    const auto result = numerical_rank(spectrum, policy);
    sweep.points.push_back({n, result.rank, result.decision_gap, condition_number(spectrum)});
  }
  return sweep;
}

RankSweep echelon_sweep(const Signal& signal, std::size_t n_min, std::size_t n_max,
                        const Real& pivot_tolerance) {
  if (n_min == 0 || n_max < n_min) throw std::invalid_argument("rank sweep needs 1 <= n_min <= n_max");
  require_sweep_length(signal, n_max);
  RankSweep sweep;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto h = build_hankel(signal, n);
    const auto spectrum = singular_values(h);
    const std::size_t pivots = row_echelon(h.entries, pivot_tolerance).pivot_count;
    sweep.points.push_back({n, pivots, spectrum_gap(spectrum, pivots), condition_number(spectrum)});
  }
  return sweep;
}

std::optional<std::size_t> plateau_onset(const RankSweep& sweep) {
  if (sweep.points.empty()) return std::nullopt;
  std::size_t i = sweep.points.size() - 1;
  const std::size_t final_rank = sweep.points[i].rank;
  while (i > 0 && sweep.points[i - 1].rank == final_rank) --i;
  return sweep.points[i].n;
}

HoKalmanResult hokalman_order(const Signal& signal, std::size_t n_max, const RankPolicy& policy,
                              std::size_t plateau_len) {
  if (n_max < 2) throw std::invalid_argument("hokalman_order needs n_max >= 2");
  if (plateau_len == 0) throw std::invalid_argument("plateau length must be positive");
  HoKalmanResult result;
  result.sweep = rank_sweep(signal, 2, n_max, policy);
  result.estimate.method = EstimatorMethod::hokalman_rank;

  const auto& pts = result.sweep.points;
  const std::size_t final_rank = pts.back().rank;
  bool plateau = pts.size() >= plateau_len && final_rank > 0;
  for (std::size_t i = pts.size() - std::min(pts.size(), plateau_len); plateau && i < pts.size(); ++i)
    plateau = pts[i].rank == final_rank;

  std::ostringstream diag;
  diag << "policy=" << policy.describe() << " plateau_len=" << plateau_len
       << " ranks=" << join_ranks(result.sweep);
  if (plateau)
    result.estimate.order = final_rank;
  else
    diag << " (no plateau)";
  result.estimate.diagnostics = diag.str();
  return result;
}

ArFit ar_fit(const Signal& signal, std::size_t p) { return ar_fit(signal, p, p); }

ArFit ar_fit(const Signal& signal, std::size_t p, std::size_t first_target) {
  if (p == 0) throw std::invalid_argument("AR order must be positive");
  const std::size_t length = signal.size();
  if (length < 2 * p + 1)
    throw std::invalid_argument("AR(" + std::to_string(p) + ") fit needs 2p+1 = " +
                                std::to_string(2 * p + 1) + " samples, signal has " +
                                std::to_string(length));
  if (first_target < p || length < first_target + p)
    throw std::invalid_argument("AR(" + std::to_string(p) + ") fit window starting at n=" +
                                std::to_string(first_target) + " is invalid for " +
                                std::to_string(length) + " samples");
  const std::size_t rows = length - first_target;
  Matrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
  Vector target(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t n = r + first_target;
    target(static_cast<Eigen::Index>(r)) = signal.samples[n];
    for (std::size_t i = 1; i <= p; ++i)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i - 1)) = signal.samples[n - i];
  }

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(default_relative_tolerance(rows, p));
  cod.compute(x);
  const Vector a = cod.solve(target);
  const Vector residual = target - x * a;

  ArFit fit;
  fit.coefficients.assign(a.data(), a.data() + a.size());
  fit.rss = residual.squaredNorm();
  fit.residual_count = rows;
  fit.rank_deficient = static_cast<std::size_t>(cod.rank()) < p;
  return fit;
}

AicResult aic_order(const Signal& signal, std::size_t p_max) {
  if (p_max == 0) throw std::invalid_argument("p_max must be positive");
  if (signal.size() < 2 * p_max + 1)
    throw std::invalid_argument("AIC up to p=" + std::to_string(p_max) + " needs 2p+1 = " +
                                std::to_string(2 * p_max + 1) + " samples, signal has " +
                                std::to_string(signal.size()));
  AicResult result;
  result.estimate.method = EstimatorMethod::aic;
  const Real floor = Real(1e-300);
  std::ostringstream diag;
  bool deficient = false;
  for (std::size_t p = 1; p <= p_max; ++p) {
    // a common window keeps K fixed, so the argmin is invariant to scaling
    const ArFit fit = ar_fit(signal, p, p_max);
    const Real k = Real(fit.residual_count);
    const Real rss = fit.rss < floor ? floor : fit.rss;
    const Real value = k * log(rss / k) + 2 * Real(p);
    result.report.per_order.push_back({p, fit.rss, value});
    if (fit.rank_deficient) {
      diag << (deficient ? "," : "rank-deficient regressors at p=") << p;
      deficient = true;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.report.per_order.size(); ++i)
    if (result.report.per_order[i].aic < result.report.per_order[best].aic) best = i;
  result.report.selected = result.report.per_order[best].p;
  result.estimate.order = result.report.selected;
  result.estimate.diagnostics = diag.str();
  return result;
}

CovDetReport covariance_determinants(const Signal& signal, std::size_t m_min, std::size_t m_max) {
  if (m_max < m_min) throw std::invalid_argument("empty covariance order range");
  if (signal.size() < m_max + 2)
    throw std::invalid_argument("covariance determinant up to m=" + std::to_string(m_max) +
                                " needs m+2 = " + std::to_string(m_max + 2) +
                                " samples, signal has " + std::to_string(signal.size()));
  CovDetReport report;
  const auto& y = signal.samples;
  for (std::size_t m = m_min; m <= m_max; ++m) {
    const auto dim = static_cast<Eigen::Index>(m + 1);
    Matrix c = Matrix::Zero(dim, dim);
    Vector phi(dim);
    const std::size_t count = y.size() - m;
    for (std::size_t n = m; n < y.size(); ++n) {
      for (std::size_t i = 0; i <= m; ++i) phi(static_cast<Eigen::Index>(i)) = y[n - i];
      c.noalias() += phi * phi.transpose();
    }
    c /= Real(count);
    report.per_order.push_back({m, Eigen::FullPivLU<Matrix>(c).determinant()});
  }
  return report;
}

OrderEstimate covdet_order(const CovDetReport& report, const Real& collapse_ratio) {
  OrderEstimate est;
  est.method = EstimatorMethod::covariance_determinant;
  const auto& e = report.per_order;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const Real prev = abs(e[i - 1].determinant);
    if (prev == 0) continue;
    if (abs(e[i].determinant) / prev <= collapse_ratio) {
      est.order = e[i].m;
      break;
    }
  }
  std::ostringstream diag;
  diag << "collapse_ratio=" << static_cast<double>(collapse_ratio);
  if (!est.order) diag << " (no collapse in range)";
  est.diagnostics = diag.str();
  return est;
}

}  // namespace hokalman
