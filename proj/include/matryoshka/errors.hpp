#pragma once

#include <stdexcept>
#include <string>

namespace mk {

// Exit codes of the CLI are the numeric values.
enum class ErrorKind {
  config = 2,
  structure = 3,
  infeasible = 4,
  numeric = 5,
  integrator = 6,
  protocol = 7,
  domain = 8,
  missing_edge_state = 9,
  io = 10,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace mk
