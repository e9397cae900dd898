#pragma once

#include <stdexcept>
#include <string>

namespace lfd {

// Malformed input file. `line` is 1-based (0 when not line-oriented) and
// `field` names the offending column or JSON key.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::string field, const std::string& what)
      : std::runtime_error(what), file_(std::move(file)), line_(line), field_(std::move(field)) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string field_;
};

}  // namespace lfd
