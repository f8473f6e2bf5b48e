#pragma once

#include <stdexcept>
#include <string>

namespace fif {

enum class ErrorKind {
  invalid_argument,  // caller broke a precondition
  data,              // malformed or inconsistent input data
  numeric,           // numerically ill-posed request
  io,
  schema,            // unknown or inconsistent model file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fif
