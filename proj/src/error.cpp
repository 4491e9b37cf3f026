#include "mrg/error.hpp"

namespace mrg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::MalformedGraph: return "MalformedGraph";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::UnknownEdge: return "UnknownEdge";
    case ErrorKind::MissingScale: return "MissingScale";
    case ErrorKind::AttributionMismatch: return "AttributionMismatch";
    case ErrorKind::NotGeneralised: return "NotGeneralised";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotMoyal: return "NotMoyal";
    case ErrorKind::InconsistentAssignment: return "InconsistentAssignment";
    case ErrorKind::InvalidTopology: return "InvalidTopology";
    case ErrorKind::InconsistentNode: return "InconsistentNode";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnboundedRatio: return "UnboundedRatio";
    case ErrorKind::MCVarianceTooHigh: return "MCVarianceTooHigh";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace mrg
