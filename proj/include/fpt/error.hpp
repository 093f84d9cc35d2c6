#pragma once

#include <stdexcept>
#include <string>

namespace fpt {

// Structured error kinds; the CLI maps these onto exit codes.
enum class ErrorKind {
  Mismatch,       // modulus or dimension mismatch between operands
  Precision,      // operation needs coefficients beyond the known precision
  Membership,     // vector not in the subgroup/layer the operation requires
  Window,         // degree window or inspection window exhausted
  Budget,         // combinatorial budget (word length, basis size, ...) exhausted
  Stabilization,  // an iteration did not stabilize within its depth bound
  Branch,         // solver branch inapplicable (no qualifying element found)
  Inconsistency,  // internal invariant violated; indicates a window too small
  Parse,          // malformed textual input (polynomials, instance files)
  Io,             // file not readable/writable
  Invalid,        // validation failed (not a representation)
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + msg),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace fpt
