#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ifp {

enum class ErrorCode {
  OutOfRange,
  DuplicateVertex,
  DuplicateEdge,
  MismatchedGroundSet,
  InvalidArgument,
  TooManyEdges,
  InfeasibleQuery,
  SNotDegreeTwoPlus,
  MOutOfRange,
  EmptyStableFamily,
  NoOpenEdge,
  InstanceTooLarge,
  SContainsLowDegreeVertex,
  TooManyHighDegreeVertices,
  NotAnExtension,
  IncompleteState,
  NoResolvedTraces,
  TooLarge,
  EmptyList,
  TCapExceeded,
  NotMaximal,
  DegenerateRegime,
  ParseError,
  UnknownKey,
  InvalidConfig,
  OutputUnwritable,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers and tests can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ifp
