#pragma once

#include <stdexcept>
#include <string>

namespace bikefleet {

enum class ErrorKind {
  io,            // file missing or unreadable
  schema,        // header or column layout does not match
  data,          // content violates a data rule (e.g. duplicate trip id)
  precondition,  // caller-supplied arguments violate an operation's contract
  consistency,   // internal invariant broken; indicates a bug or mismatched inputs
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// CLI exit code for an error category: 2 I/O, 3 schema/data, 4 precondition,
/// 5 internal consistency.
int exit_code(ErrorKind kind) noexcept;

const char* to_string(ErrorKind kind) noexcept;

}  // namespace bikefleet
