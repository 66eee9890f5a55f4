#pragma once

#include <stdexcept>
#include <string>

namespace cforge {

struct SourcePos {
  int line = 0;
  int column = 0;
  bool valid() const { return line > 0; }
  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

// Base class for all errors surfaced to callers. The CLI maps these to
// exit code 1 with a one-line diagnostic on stderr.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& msg)
      : Error(pos.valid() ? pos.str() + ": " + msg : msg), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class SortError : public Error {
 public:
  SortError(SourcePos pos, const std::string& msg)
      : Error(pos.valid() ? pos.str() + ": " + msg : msg), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// Invariant breaches inside the pipeline (never expected on valid input).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cforge
