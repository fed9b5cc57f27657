#include "ifp/error.hpp"

namespace ifp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::MismatchedGroundSet: return "MismatchedGroundSet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooManyEdges: return "TooManyEdges";
    case ErrorCode::InfeasibleQuery: return "InfeasibleQuery";
    case ErrorCode::SNotDegreeTwoPlus: return "SNotDegreeTwoPlus";
    case ErrorCode::MOutOfRange: return "MOutOfRange";
    case ErrorCode::EmptyStableFamily: return "EmptyStableFamily";
    case ErrorCode::NoOpenEdge: return "NoOpenEdge";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::SContainsLowDegreeVertex: return "SContainsLowDegreeVertex";
    case ErrorCode::TooManyHighDegreeVertices: return "TooManyHighDegreeVertices";
    case ErrorCode::NotAnExtension: return "NotAnExtension";
    case ErrorCode::IncompleteState: return "IncompleteState";
    case ErrorCode::NoResolvedTraces: return "NoResolvedTraces";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::TCapExceeded: return "TCapExceeded";
    case ErrorCode::NotMaximal: return "NotMaximal";
    case ErrorCode::DegenerateRegime: return "DegenerateRegime";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::OutputUnwritable: return "OutputUnwritable";
  }
  return "Unknown";
}

}  // namespace ifp
