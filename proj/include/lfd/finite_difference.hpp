#pragma once

#include <span>

#include <Eigen/Dense>

namespace lfd {

// Derivative of order 1..3 of a sampled series (one row per sample, any
// number of columns). Each order is a fresh pass of the first-order stencil:
// three-point central differences inside, three-point second-order one-sided
// differences at both ends (two-point differences when only two samples
// exist), all valid on non-uniform grids.
//
// Throws std::invalid_argument for order outside 1..3, fewer than order + 1
// samples, a size mismatch, or timestamps that are not strictly increasing.
Eigen::MatrixXd finite_difference(std::span<const double> t, const Eigen::MatrixXd& values,
                                  int order);

// Rows whose order-k derivative is unaffected by the one-sided end stencils:
// [k, n - 1 - k]. Returns an empty range (first > last) when none exist.
struct IndexRange {
  std::ptrdiff_t first = 0;
  std::ptrdiff_t last = -1;
  bool empty() const noexcept { return first > last; }
  std::ptrdiff_t count() const noexcept { return empty() ? 0 : last - first + 1; }
};
IndexRange interior_rows(std::ptrdiff_t n, int order);

// Centered moving average with a window shrinking symmetrically near the
// ends (so the first and last rows are left untouched).
Eigen::MatrixXd centered_moving_average(const Eigen::MatrixXd& values, int window);

}  // namespace lfd
