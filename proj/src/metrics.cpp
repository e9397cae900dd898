#include "lfd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "lfd/finite_difference.hpp"

namespace lfd::metrics {

namespace {

struct Stats {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
};

Stats norm_stats(const Eigen::MatrixXd& rows, IndexRange range) {
  Stats s;
  const auto count = static_cast<double>(range.count());
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(range.count()));
  for (std::ptrdiff_t i = range.first; i <= range.last; ++i) {
    norms.push_back(rows.row(i).norm());
  }
  s.mean = std::accumulate(norms.begin(), norms.end(), 0.0) / count;
  s.max = *std::max_element(norms.begin(), norms.end());
  if (norms.size() > 1) {
    double ss = 0.0;
    for (const double v : norms) {
      ss += (v - s.mean) * (v - s.mean);
    }
    s.std = std::sqrt(ss / (count - 1.0));
  }
  return s;
}

MetricComparison compare(const std::string& name, double a, double b) {
  MetricComparison c{name, a, b, 1.0, "tie"};
  if (a != b) {
    c.ratio = b == 0.0 ? std::numeric_limits<double>::infinity() : a / b;
    c.winner = a < b ? "a" : "b";
  }
  return c;
}

}  // namespace

JerkReport jerk_metrics(const Trajectory& traj) {
  if (traj.size() < 4) {
    throw std::invalid_argument("jerk_metrics: need at least 4 samples, got " +
                                std::to_string(traj.size()));
  }
  if (!is_uniformly_sampled(traj)) {
    throw std::invalid_argument("jerk_metrics: trajectory is not uniformly sampled; resample first");
  }
  const std::vector<double> t = traj.times();
  const Eigen::MatrixXd jerk = finite_difference(t, traj.positions(), 3);
  const Eigen::MatrixXd omega = angular_velocity(traj);
  const Eigen::MatrixXd ang_jerk = finite_difference(t, omega, 2);

  const auto n = static_cast<std::ptrdiff_t>(traj.size());
  IndexRange range = interior_rows(n, 3);
  if (range.empty()) {
    range = {0, n - 1};
  }
  const Stats lin = norm_stats(jerk, range);
  const Stats ang = norm_stats(ang_jerk, range);
  return {lin.mean, lin.std, lin.max, ang.mean, ang.std, ang.max,
          static_cast<std::size_t>(range.count())};
}

TimingReport timing_stats(const std::vector<double>& durations) {
  if (durations.empty()) {
    throw std::invalid_argument("timing_stats: no durations");
  }
  TimingReport r;
  r.durations = durations;
  const auto n = static_cast<double>(durations.size());
  r.mean = std::accumulate(durations.begin(), durations.end(), 0.0) / n;
  r.min = *std::min_element(durations.begin(), durations.end());
  r.max = *std::max_element(durations.begin(), durations.end());
  if (durations.size() > 1) {
    double ss = 0.0;
    for (const double d : durations) {
      ss += (d - r.mean) * (d - r.mean);
    }
    r.std = std::sqrt(ss / (n - 1.0));
  }
  return r;
}

std::vector<MetricComparison> compare_demonstrations(const Trajectory& a, const Trajectory& b) {
  const JerkReport ja = jerk_metrics(a);
  const JerkReport jb = jerk_metrics(b);
  return {compare("duration_s", a.duration(), b.duration()),
          compare("mean_jerk", ja.mean, jb.mean), compare("max_jerk", ja.max, jb.max)};
}

SummaryRow summary_row(const std::string& label, double mean, double std, int digits) {
  return {label, fmt::format("{:.{}f} ± {:.{}f}", mean, digits, std, digits)};
}

std::string render_table(const std::string& title, const std::vector<SummaryRow>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) {
    width = std::max(width, r.label.size());
  }
  std::string out = title + "\n";
  for (const auto& r : rows) {
    out += fmt::format("  {:<{}}  {}\n", r.label, width, r.text);
  }
  return out;
}

}  // namespace lfd::metrics
