/**
 * @file errors.hpp
 * @brief Typed error codes shared by every solver component.
 */

#ifndef GIP_ERRORS_HPP
#define GIP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gip {

enum class ErrorCode {
  TooLarge,
  NotIntegral,
  NotRelaxed,
  WrongFlavor,
  EmptyGroup,
  BadQ,
  RootNotInR,
  NoExcludedGroup,
  UnknownVariable,
  Unreachable,
  MatchingFailed,
  NoDirectedRealization,
  OutOfRange,
  PlacementFailure,
  InfeasibleModel,
  NumericalFailure,
  ParseError,
  InvalidInstance,
};

/// Exception carrying a machine-readable code plus an optional index
/// (group id, variable id, ...) for errors that reference one.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message, int index = -1)
      : std::runtime_error(std::move(message)), code_(code), index_(index) {}

  ErrorCode code() const { return code_; }
  int index() const { return index_; }

private:
  ErrorCode code_;
  int index_;
};

} // namespace gip

#endif // GIP_ERRORS_HPP
