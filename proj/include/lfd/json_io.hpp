#pragma once

// Strict JSON reading helpers shared by the DMP, scene and config loaders.
// Every failure is a ParseError naming the source and the dotted key path.

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lfd/se3.hpp"

namespace lfd::json_io {

using Json = nlohmann::json;

// Parses a whole file; syntax errors carry the line reported by the parser.
Json read_file(const std::string& path);
Json parse_text(const std::string& text, const std::string& source);

// Context for error messages: the source name plus the key path so far.
struct Where {
  std::string source;
  std::string path;

  Where operator/(std::string_view key) const;
  [[noreturn]] void fail(const std::string& what) const;
};

const Json& require_object(const Json& j, const Where& at);
void reject_unknown_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                         const Where& at);
const Json& require(const Json& j, std::string_view key, const Where& at);

double to_double(const Json& j, const Where& at);
int to_int(const Json& j, const Where& at);
bool to_bool(const Json& j, const Where& at);
std::string to_string(const Json& j, const Where& at);
Eigen::Vector3d to_vec3(const Json& j, const Where& at);
// {"position": [x, y, z], "orientation": [w, x, y, z]}
Pose to_pose(const Json& j, const Where& at);
std::vector<double> to_double_array(const Json& j, const Where& at);

Json from_vec3(const Eigen::Vector3d& v);
Json from_pose(const Pose& p);

// Reads `key` into `out` when present; leaves `out` untouched otherwise.
template <typename T, typename Conv>
void read_optional(const Json& j, std::string_view key, const Where& at, T& out, Conv conv) {
  const auto it = j.find(std::string(key));
  if (it != j.end()) {
    out = conv(*it, at / key);
  }
}

}  // namespace lfd::json_io
