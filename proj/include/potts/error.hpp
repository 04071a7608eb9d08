#pragma once

#include <stdexcept>
#include <string>

namespace potts {

// Malformed or inconsistent user input (graph files, decompositions, flags).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text failed to parse; carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Failure during a computation that was given valid input.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A brute-force reference was asked for an instance above its size guard.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace potts
