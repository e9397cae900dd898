#include "lfd/finite_difference.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lfd {

namespace {

Eigen::MatrixXd first_difference(std::span<const double> t, const Eigen::MatrixXd& v) {
  const Eigen::Index n = v.rows();
  Eigen::MatrixXd d(n, v.cols());
  if (n == 2) {
    d.row(0) = (v.row(1) - v.row(0)) / (t[1] - t[0]);
    d.row(1) = d.row(0);
    return d;
  }
  {
    const double h1 = t[1] - t[0];
    const double h2 = t[2] - t[1];
    d.row(0) = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v.row(0) +
               (h1 + h2) / (h1 * h2) * v.row(1) - h1 / (h2 * (h1 + h2)) * v.row(2);
  }
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double hm = t[i] - t[i - 1];
    const double hp = t[i + 1] - t[i];
    d.row(i) = -hp / (hm * (hm + hp)) * v.row(i - 1) + (hp - hm) / (hm * hp) * v.row(i) +
               hm / (hp * (hm + hp)) * v.row(i + 1);
  }
  {
    const double h1 = t[n - 1] - t[n - 2];
    const double h2 = t[n - 2] - t[n - 3];
    d.row(n - 1) = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * v.row(n - 1) -
                   (h1 + h2) / (h1 * h2) * v.row(n - 2) + h1 / (h2 * (h1 + h2)) * v.row(n - 3);
  }
  return d;
}

}  // namespace

Eigen::MatrixXd finite_difference(std::span<const double> t, const Eigen::MatrixXd& values,
                                  int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("finite_difference: order must be 1, 2 or 3");
  }
  const auto n = static_cast<Eigen::Index>(t.size());
  if (values.rows() != n) {
    throw std::invalid_argument("finite_difference: time/value length mismatch");
  }
  if (n < order + 1) {
    throw std::invalid_argument("finite_difference: order " + std::to_string(order) +
                                " needs at least " + std::to_string(order + 1) +
                                " samples, got " + std::to_string(n));
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(t[i] > t[i - 1])) {
      throw std::invalid_argument("finite_difference: timestamps must be strictly increasing");
    }
  }
  Eigen::MatrixXd d = values;
  for (int k = 0; k < order; ++k) {
    d = first_difference(t, d);
  }
  return d;
}

IndexRange interior_rows(std::ptrdiff_t n, int order) {
  return {order, n - 1 - order};
}

Eigen::MatrixXd centered_moving_average(const Eigen::MatrixXd& values, int window) {
  const Eigen::Index n = values.rows();
  const Eigen::Index half = std::max(0, window / 2);
  Eigen::MatrixXd out(n, values.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = std::min({half, i, n - 1 - i});
    out.row(i) = values.middleRows(i - r, 2 * r + 1).colwise().mean();
  }
  return out;
}

}  // namespace lfd
