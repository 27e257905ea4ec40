// Responses (Hankel) matrices built from translated windows of a signal,
// the input-augmented variant, and tolerance-aware row reduction.
#pragma once

#include "hokalman/rational.hpp"
#include "hokalman/real.hpp"
#include "hokalman/signal.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>

namespace hokalman {

/// entries(i, j) = samples[i + j].
struct HankelMatrix {
  Matrix entries;
  /// rows + cols - 1 samples are read from the source signal.
  std::size_t source_length = 0;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

enum class AugmentationSide { bottom_row_of_inputs, right_column_of_inputs };

/// An n x n output block padded with one row (bottom) or one column (right)
/// of input samples u[0..n-1].
struct AugmentedHankel {
  Matrix entries;
  AugmentationSide side = AugmentationSide::bottom_row_of_inputs;
};

/// Square n x n Hankel matrix; needs at least 2n - 1 samples.
HankelMatrix build_hankel(const Signal& signal, std::size_t n);

/// rows x cols Hankel matrix; needs at least rows + cols - 1 samples.
HankelMatrix build_rectangular_hankel(const Signal& signal, std::size_t rows, std::size_t cols);

AugmentedHankel build_augmented(const Signal& y, const Signal& u, std::size_t n,
                                AugmentationSide side);

/// Exact Hankel matrix over rational samples.
RationalMatrix hankel_rational(std::span<const mpq_class> samples, std::size_t rows,
                               std::size_t cols);

template <typename MatrixT>
struct EchelonResult {
  MatrixT reduced;
  std::size_t pivot_count = 0;
};

namespace detail {

inline Real magnitude(const Real& x) { return abs(x); }
inline mpq_class magnitude(const mpq_class& x) { return abs(x); }

}  // namespace detail

/// Gaussian elimination with partial pivoting.
///
/// A pivot is accepted only if its magnitude exceeds
/// pivot_tolerance * max|entry of the input|; columns without an accepted
/// pivot are cleared below the current row. Works for Matrix (Real) and
/// RationalMatrix (exact, where tolerance 0 gives the exact rank).
template <typename MatrixT>
EchelonResult<MatrixT> row_echelon(MatrixT matrix,
                                   const typename MatrixT::Scalar& pivot_tolerance) {
  using Scalar = typename MatrixT::Scalar;
  using detail::magnitude;
  if (pivot_tolerance < 0) throw std::invalid_argument("pivot tolerance must be non-negative");

  const auto rows = static_cast<std::size_t>(matrix.rows());
  const auto cols = static_cast<std::size_t>(matrix.cols());
  Scalar largest = 0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) largest = std::max<Scalar>(largest, magnitude(matrix(i, j)));
  const Scalar threshold = pivot_tolerance * largest;

  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t best = row;
    Scalar best_mag = magnitude(matrix(row, col));
    for (std::size_t i = row + 1; i < rows; ++i) {
      Scalar mag = magnitude(matrix(i, col));
      if (mag > best_mag) {
        best = i;
        best_mag = std::move(mag);
      }
    }
    if (!(best_mag > threshold)) {
      for (std::size_t i = row; i < rows; ++i) matrix(i, col) = 0;
      continue;
    }
    if (best != row)
      for (std::size_t j = col; j < cols; ++j) std::swap(matrix(best, j), matrix(row, j));
    for (std::size_t i = row + 1; i < rows; ++i) {
      if (matrix(i, col) == 0) continue;
      const Scalar factor = matrix(i, col) / matrix(row, col);
      for (std::size_t j = col + 1; j < cols; ++j) matrix(i, j) -= factor * matrix(row, j);
      matrix(i, col) = 0;
    }
    ++row;
  }
  return {std::move(matrix), row};
}

}  // namespace hokalman
