#pragma once

#include <stdexcept>
#include <string>

namespace torsion {

enum class ErrorKind {
  Dimension,
  Domain,
  Numeric,
  Configuration,
  Data,           // violated mathematical invariant of the input (d^2 != 0, ...)
  Unsupported,
  IllConditioned,
  Precision,
  Schema,         // malformed input document
  Construction,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg);

}  // namespace torsion
