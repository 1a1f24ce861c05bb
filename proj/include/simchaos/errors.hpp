#pragma once

#include <stdexcept>
#include <string>

namespace simchaos {

enum class ErrorKind {
  InvalidArgument,
  DigitOutOfRange,
  HorizonExceeded,
  UnsupportedExactDistance,
  UnsupportedBase,
  UnsupportedSpace,
  Undecidable,
  ResourceCap,
  OutsideRoot,
  NotInSet,
  MissingWitnessTable,
  LabelingError,
  UnresolvedCoupling,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this one exception type; the
// kind lets the CLI map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace simchaos
