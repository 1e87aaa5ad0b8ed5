#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msr {

enum class ErrorKind {
  invalid_argument,   // bad caller input (out-of-range length, unknown point, ...)
  membership,         // point already part of the sequence
  horizon_violation,  // origin too far away for the pruning guarantee
  out_of_domain,      // formula evaluated outside its domain
  invariant,          // a type invariant does not hold (instance, store, ...)
  mismatch,           // store/instance fingerprint or recomputation mismatch
  missing_level,      // query asks for a level the store never built
  empty_result,       // no candidate satisfies the query
  too_large,          // exhaustive search guard tripped
  parse,              // malformed file contents
  io,                 // file could not be opened/written
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace msr
