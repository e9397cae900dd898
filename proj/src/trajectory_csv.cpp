#include "lfd/trajectory_csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "lfd/format.hpp"
#include "lfd/io_error.hpp"

namespace lfd {

namespace {

constexpr std::array<const char*, 8> kPoseColumns = {"t", "px", "py", "pz", "qw", "qx", "qy", "qz"};
constexpr std::array<const char*, 6> kWrenchColumns = {"fx", "fy", "fz", "tx", "ty", "tz"};

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, const std::string& source, std::size_t line,
                  const char* column) {
  const std::string cell = trim(raw);
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(source, line, column, "not a number: '" + cell + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(source, line, column, "non-finite value");
  }
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError(source_name, 1, "header", "empty file");
  }
  ++line_no;
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) {
    h = trim(h);
  }
  const bool with_wrench = header.size() == kPoseColumns.size() + kWrenchColumns.size();
  if (header.size() != kPoseColumns.size() && !with_wrench) {
    throw ParseError(source_name, 1, "header",
                     "expected 8 or 14 columns, got " + std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    const char* expected =
        i < kPoseColumns.size() ? kPoseColumns[i] : kWrenchColumns[i - kPoseColumns.size()];
    if (header[i] != expected) {
      throw ParseError(source_name, 1, expected,
                       "expected column '" + std::string(expected) + "', got '" + header[i] + "'");
    }
  }

  Trajectory traj;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line) == "\r") {
      continue;
    }
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(source_name, line_no, "row",
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(cells.size()));
    }
    std::array<double, 14> v{};
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const char* col =
          i < kPoseColumns.size() ? kPoseColumns[i] : kWrenchColumns[i - kPoseColumns.size()];
      v[i] = parse_cell(cells[i], source_name, line_no, col);
    }
    TrajectorySample s;
    s.t = v[0];
    s.pose.position = {v[1], v[2], v[3]};
    try {
      s.pose.orientation = UnitQuaternion(v[4], v[5], v[6], v[7]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source_name, line_no, "qw", e.what());
    }
    if (with_wrench) {
      s.wrench = Wrench({v[8], v[9], v[10]}, {v[11], v[12], v[13]});
    }
    if (!traj.empty() && !(s.t > traj.back().t)) {
      throw ParseError(source_name, line_no, "t", "timestamps must be strictly increasing");
    }
    traj.push_back(std::move(s));
  }
  if (traj.empty()) {
    throw ParseError(source_name, line_no, "row", "no samples");
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "file", "cannot open file");
  }
  return read_trajectory_csv(in, path);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const bool with_wrench = traj.has_wrench();
  out << "t,px,py,pz,qw,qx,qy,qz";
  if (with_wrench) {
    out << ",fx,fy,fz,tx,ty,tz";
  }
  out << '\n';
  for (const auto& s : traj) {
    const auto& p = s.pose.position;
    const auto& q = s.pose.orientation;
    out << format_number(s.t) << ',' << format_number(p.x()) << ',' << format_number(p.y()) << ','
        << format_number(p.z()) << ',' << format_number(q.w()) << ',' << format_number(q.x())
        << ',' << format_number(q.y()) << ',' << format_number(q.z());
    if (with_wrench) {
      for (int i = 0; i < 3; ++i) {
        out << ',' << format_number(s.wrench->force[i]);
      }
      for (int i = 0; i < 3; ++i) {
        out << ',' << format_number(s.wrench->torque[i]);
      }
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  write_trajectory_csv(out, traj);
}

}  // namespace lfd
