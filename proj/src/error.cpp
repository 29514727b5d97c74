#include "bikefleet/error.hpp"

namespace bikefleet {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io: return 2;
    case ErrorKind::schema: return 3;
    case ErrorKind::data: return 3;
    case ErrorKind::precondition: return 4;
    case ErrorKind::consistency: return 5;
  }
  return 5;
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::schema: return "schema";
    case ErrorKind::data: return "data";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

}  // namespace bikefleet
