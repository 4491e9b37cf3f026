#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mrg {

enum class ErrorKind {
  Parse,                  // unreadable file or schema violation
  MalformedGraph,         // port reuse, wrong valence, n(l) < 1
  InvalidMap,             // odd Euler characteristic and friends
  UnknownEdge,
  MissingScale,
  AttributionMismatch,
  NotGeneralised,
  Disconnected,
  NotMoyal,
  InconsistentAssignment,
  InvalidTopology,
  InconsistentNode,
  QuadratureFailure,
  UnboundedRatio,
  MCVarianceTooHigh,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mrg
