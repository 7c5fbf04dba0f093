#pragma once

#include <stdexcept>
#include <string>

namespace ssmpc {

// All recoverable failures surface as Error with a short lowercase message,
// e.g. "numeric blowup: state non-finite at t=1.25".
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

}  // namespace ssmpc
