#include "hokalman/hankel.hpp"

#include <stdexcept>
#include <string>

namespace hokalman {

namespace {

void require_samples(const Signal& signal, std::size_t needed, const char* what) {
  if (signal.size() < needed)
    throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(needed) +
                                " samples, signal has " + std::to_string(signal.size()));
}

}  // namespace

HankelMatrix build_rectangular_hankel(const Signal& signal, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("Hankel dimensions must be positive");
  const std::size_t needed = rows + cols - 1;
  require_samples(signal, needed, "Hankel matrix");
  HankelMatrix h;
  h.entries.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      h.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = signal.samples[i + j];
  h.source_length = needed;
  return h;
}

HankelMatrix build_hankel(const Signal& signal, std::size_t n) {
  if (n == 0) throw std::invalid_argument("Hankel dimension must be positive");
  if (signal.size() < 2 * n - 1)
    throw std::invalid_argument("a " + std::to_string(n) + "x" + std::to_string(n) +
                                " Hankel matrix needs 2n-1 = " + std::to_string(2 * n - 1) +
                                " samples, signal has " + std::to_string(signal.size()));
  return build_rectangular_hankel(signal, n, n);
}

AugmentedHankel build_augmented(const Signal& y, const Signal& u, std::size_t n,
                                AugmentationSide side) {
  const HankelMatrix block = build_hankel(y, n);
  require_samples(u, n, "input augmentation");
  const auto dim = static_cast<Eigen::Index>(n);
  AugmentedHankel aug;
  aug.side = side;
  if (side == AugmentationSide::bottom_row_of_inputs) {
    aug.entries.resize(dim + 1, dim);
    aug.entries.topRows(dim) = block.entries;
    for (Eigen::Index j = 0; j < dim; ++j) aug.entries(dim, j) = u.samples[static_cast<std::size_t>(j)];
  } else {
    aug.entries.resize(dim, dim + 1);
    aug.entries.leftCols(dim) = block.entries;
    for (Eigen::Index i = 0; i < dim; ++i) aug.entries(i, dim) = u.samples[static_cast<std::size_t>(i)];
  }
  return aug;
}

RationalMatrix hankel_rational(std::span<const mpq_class> samples, std::size_t rows,
                               std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("Hankel dimensions must be positive");
  if (samples.size() < rows + cols - 1)
    throw std::invalid_argument("exact Hankel matrix needs " + std::to_string(rows + cols - 1) +
                                " samples, got " + std::to_string(samples.size()));
  RationalMatrix h(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) h(i, j) = samples[i + j];
  return h;
}

}  // namespace hokalman
