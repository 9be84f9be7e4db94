#pragma once

#include <stdexcept>
#include <string>

namespace vecbias {

enum class ErrorCode {
  io,               // file could not be opened / read / written
  parse,            // malformed input file
  invalid_argument, // bad parameter or dimension mismatch
  not_found,        // token missing from a vocabulary
  unobserved_pair,  // co-occurrence count is zero where a positive count is required
  numeric,          // degenerate numeric condition (ties, zero variance, ...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace vecbias
