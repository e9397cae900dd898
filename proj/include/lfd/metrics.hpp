#pragma once

#include <string>
#include <vector>

#include "lfd/trajectory.hpp"

namespace lfd::metrics {

// Statistics of the per-sample jerk norm. Translation (m/s^3) is the
// headline; angular jerk (rad/s^3) is reported separately, never mixed in.
struct JerkReport {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double max = 0.0;
  double angular_mean = 0.0;
  double angular_std = 0.0;
  double angular_max = 0.0;
  std::size_t samples = 0;  // rows the statistics were taken over
};

// Third finite difference of the position series, Euclidean norm per sample,
// statistics over the rows untouched by the one-sided end stencils (all rows
// when the trajectory is too short to have any). Requires >= 4 uniformly
// spaced samples; throws std::invalid_argument otherwise.
JerkReport jerk_metrics(const Trajectory& traj);

struct TimingReport {
  std::vector<double> durations;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single entry
  double min = 0.0;
  double max = 0.0;
};

// Throws std::invalid_argument for an empty list.
TimingReport timing_stats(const std::vector<double>& durations);

struct MetricComparison {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double ratio = 1.0;  // a / b; 1 when both are zero
  std::string winner;  // "a", "b" or "tie" (lower is better)
};

// Duration, mean jerk norm and max jerk norm of two demonstrations.
std::vector<MetricComparison> compare_demonstrations(const Trajectory& a, const Trajectory& b);

// A row of a "mean ± std" summary table. Computed rows are formatted with
// `digits` decimals; reference rows carry their text verbatim.
struct SummaryRow {
  std::string label;
  std::string text;
};
SummaryRow summary_row(const std::string& label, double mean, double std, int digits);
std::string render_table(const std::string& title, const std::vector<SummaryRow>& rows);

}  // namespace lfd::metrics
