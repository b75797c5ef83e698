#pragma once

#include <stdexcept>
#include <string>

namespace rdm {

enum class ErrorCode {
  parse,            // malformed query text
  data,             // malformed or inconsistent instance data
  unsupported,      // query shape not handled by the requested operation
  undefined,        // resilience is infinite (a witness has no deletable tuple)
  limit,            // branch-and-bound node or simplex iteration cap hit
  unknown_tuple,    // tuple id not present in the instance
  budget,           // oracle budget exceeded
  resource,         // expression expansion too large
  cancelled,        // caller requested a stop
  invalid_argument,
  internal,         // audit failure; indicates a bug
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdm
