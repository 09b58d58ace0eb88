#pragma once

#include <stdexcept>
#include <string>

namespace recmc {

enum class ErrorKind {
  NegatedCall,
  PathExplosion,
  NotNormalized,
  WrongMode,
  ModelMismatch,
  UnassignedVar,
  ArityMismatch,
  NotUnsat,
  ResourceLimit,
  SyntaxError,
  ValidationError,
  TooLarge,
  PreconditionFailed,
  ProvenanceGap,
  Internal,
  Io,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, const std::string& msg)
      : Error(ErrorKind::SyntaxError,
              std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

#define RECMC_CHECK(cond, msg)                                               \
  do {                                                                       \
    if (!(cond)) throw ::recmc::Error(::recmc::ErrorKind::Internal, (msg)); \
  } while (0)

}  // namespace recmc
