#include "lfd/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lfd/io_error.hpp"

namespace lfd::json_io {

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to a line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line =
        static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n')) + 1;
    throw ParseError(source, line, "json", "malformed JSON");
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path, 0, "file", "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

Where Where::operator/(std::string_view key) const {
  return {source, path.empty() ? std::string(key) : path + "." + std::string(key)};
}

void Where::fail(const std::string& what) const {
  throw ParseError(source, 0, path.empty() ? "<root>" : path, what);
}

const Json& require_object(const Json& j, const Where& at) {
  if (!j.is_object()) {
    at.fail("expected an object");
  }
  return j;
}

void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                         const Where& at) {
  require_object(j, at);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto a : allowed) {
      known = known || a == key;
    }
    if (!known) {
      (at / key).fail("unknown key");
    }
  }
}

const Json& require(const Json& j, std::string_view key, const Where& at) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) {
    (at / key).fail("missing key");
  }
  return *it;
}

double to_double(const Json& j, const Where& at) {
  if (!j.is_number()) {
    at.fail("expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    at.fail("non-finite number");
  }
  return v;
}

int to_int(const Json& j, const Where& at) {
  if (!j.is_number_integer()) {
    at.fail("expected an integer");
  }
  return j.get<int>();
}

bool to_bool(const Json& j, const Where& at) {
  if (!j.is_boolean()) {
    at.fail("expected true or false");
  }
  return j.get<bool>();
}

std::string to_string(const Json& j, const Where& at) {
  if (!j.is_string()) {
    at.fail("expected a string");
  }
  return j.get<std::string>();
}

std::vector<double> to_double_array(const Json& j, const Where& at) {
  if (!j.is_array()) {
    at.fail("expected an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_double(j[i], at / std::to_string(i)));
  }
  return out;
}

Eigen::Vector3d to_vec3(const Json& j, const Where& at) {
  const std::vector<double> v = to_double_array(j, at);
  if (v.size() != 3) {
    at.fail("expected 3 numbers");
  }
  return {v[0], v[1], v[2]};
}

Pose to_pose(const Json& j, const Where& at) {
  reject_unknown_keys(j, {"position", "orientation"}, at);
  Pose p;
  p.position = to_vec3(require(j, "position", at), at / "position");
  const std::vector<double> q = to_double_array(require(j, "orientation", at), at / "orientation");
  if (q.size() != 4) {
    (at / "orientation").fail("expected 4 numbers (w, x, y, z)");
  }
  try {
    p.orientation = UnitQuaternion(q[0], q[1], q[2], q[3]);
  } catch (const std::invalid_argument& e) {
    (at / "orientation").fail(e.what());
  }
  return p;
}

Json from_vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json from_pose(const Pose& p) {
  const auto& q = p.orientation;
  return {{"position", from_vec3(p.position)},
          {"orientation", Json::array({q.w(), q.x(), q.y(), q.z()})}};
}

}  // namespace lfd::json_io
