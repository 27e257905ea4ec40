#include "hokalman/rank.hpp"

#include "hokalman/hankel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hokalman {

namespace {

std::string short_real(const Real& x) {
  std::ostringstream os;
  os.precision(6);
  os << static_cast<double>(x);
  return os.str();
}

Real ratio(const Real& upper, const Real& lower) {
  if (lower == 0) return upper == 0 ? Real(0) : infinity();
  return upper / lower;
}

Real gap_at(const std::vector<Real>& values, std::size_t rank) {
  if (rank >= values.size()) return infinity();
  if (rank == 0) return values.front() == 0 ? infinity() : Real(0);
  return ratio(values[rank - 1], values[rank]);
}

}  // namespace

RankPolicy RankPolicy::relative(const Real& tau) {
  if (!(tau > 0 && tau < 1))
    throw std::invalid_argument("relative tolerance must lie in (0, 1), got " + short_real(tau));
  return RankPolicy(RankPolicyKind::relative_threshold, tau);
}

RankPolicy RankPolicy::absolute(const Real& tau) {
  if (!(tau > 0) || !boost::multiprecision::isfinite(tau))
    throw std::invalid_argument("absolute tolerance must be positive, got " + short_real(tau));
  return RankPolicy(RankPolicyKind::absolute_threshold, tau);
}

RankPolicy RankPolicy::gap(const Real& min_ratio) {
  if (!(min_ratio > 1))
    throw std::invalid_argument("gap ratio must exceed 1, got " + short_real(min_ratio));
  return RankPolicy(RankPolicyKind::gap_ratio, min_ratio);
}

std::string RankPolicy::describe() const {
  std::string arg = value_ ? short_real(*value_) : std::string("default");
  switch (kind_) {
    case RankPolicyKind::relative_threshold: return "relative(" + arg + ")";
    case RankPolicyKind::absolute_threshold: return "absolute(" + arg + ")";
    case RankPolicyKind::gap_ratio: return "gap(" + arg + ")";
  }
  return "unknown";
}

Real default_relative_tolerance(std::size_t rows, std::size_t cols) {
  return Real(std::max(rows, cols)) * machine_epsilon() * 64;
}

RankPolicy parse_policy(const std::string& name, const std::optional<double>& value) {
  if (name == "relative") return value ? RankPolicy::relative(*value) : RankPolicy::default_policy();
  if (name == "absolute") {
    if (!value) throw std::invalid_argument("policy 'absolute' requires --tol");
    return RankPolicy::absolute(*value);
  }
  if (name == "gap") return RankPolicy::gap(value ? Real(*value) : RankPolicy::default_gap_ratio());
  throw std::invalid_argument("unknown rank policy '" + name + "' (expected relative, absolute or gap)");
}

SingularSpectrum singular_values(const Matrix& matrix) {
  if (matrix.size() == 0) throw std::invalid_argument("singular_values of an empty matrix");
  for (Eigen::Index i = 0; i < matrix.size(); ++i)
    if (!boost::multiprecision::isfinite(matrix.data()[i]))
      throw std::invalid_argument("singular_values: matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(matrix);
  const auto& sv = svd.singularValues();
  SingularSpectrum s;
  s.rows = static_cast<std::size_t>(matrix.rows());
  s.cols = static_cast<std::size_t>(matrix.cols());
  s.values.assign(sv.data(), sv.data() + sv.size());
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

SingularSpectrum singular_values(const HankelMatrix& matrix) { return singular_values(matrix.entries); }

SingularSpectrum singular_values(const AugmentedHankel& matrix) {
  return singular_values(matrix.entries);
}

RankResult numerical_rank(const SingularSpectrum& spectrum, const RankPolicy& policy) {
  RankResult result;
  result.policy = policy;
  result.spectrum = spectrum;
  const auto& v = spectrum.values;
  if (v.empty() || v.front() == 0) {
    result.rank = 0;
    result.decision_gap = infinity();
    return result;
  }

  switch (policy.kind()) {
    case RankPolicyKind::relative_threshold: {
      const Real tau = policy.value() ? *policy.value()
                                      : default_relative_tolerance(spectrum.rows, spectrum.cols);
      const Real cut = tau * v.front();
      result.rank = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](const Real& s) { return s > cut; }));
      result.decision_gap = gap_at(v, result.rank);
      break;
    }
    case RankPolicyKind::absolute_threshold: {
      const Real& cut = *policy.value();
      result.rank = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](const Real& s) { return s > cut; }));
      result.decision_gap = gap_at(v, result.rank);
      break;
    }
    case RankPolicyKind::gap_ratio: {
      Real best = 0;
      std::size_t best_index = v.size();
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i] == 0) break;
        const Real r = ratio(v[i], v[i + 1]);
        if (r > best) {
          best = r;
          best_index = i + 1;
        }
      }
      if (best_index < v.size() && best >= *policy.value()) {
        result.rank = best_index;
        result.decision_gap = best;
      } else {
        result.rank = v.size();
        result.decision_gap = v.size() == 1 ? infinity() : best;
      }
      break;
    }
  }
  return result;
}

RankResult matrix_rank(const Matrix& matrix, const RankPolicy& policy) {
  return numerical_rank(singular_values(matrix), policy);
}

Real condition_number(const SingularSpectrum& spectrum) {
  if (spectrum.values.empty()) throw std::invalid_argument("condition_number of an empty spectrum");
  const Real& lo = spectrum.smallest();
  if (lo == 0) return infinity();
  return spectrum.largest() / lo;
}

std::size_t exact_rank_rational(const RationalMatrix& matrix) {
  const std::size_t rows = matrix.rows();
  const std::size_t cols = matrix.cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class scale = 1;
    for (std::size_t j = 0; j < cols; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), matrix(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < cols; ++j) {
      const mpq_class& q = matrix(i, j);
      a[i][j] = q.get_num() * (scale / q.get_den());
    }
  }

  mpz_class previous = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const mpz_class& p = a[rank][col];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        mpz_class t = p * a[i][j] - a[i][col] * a[rank][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
      }
      a[i][col] = 0;
    }
    previous = p;
    ++rank;
  }
  return rank;
}

}  // namespace hokalman
