#pragma once

#include <stdexcept>
#include <string>

namespace hgeo {

enum class ErrorKind {
  input,           // malformed or inconsistent user input
  domain,          // argument outside the operation's domain (e.g. zero vector)
  null_cone,       // K(x,x) too close to zero for a Killing-sphere operation
  unsupported,     // configuration the operation does not handle
  wrong_case,      // Case 1 / Case 2 dispatch mismatch
  invalid_hyperplane,
  solver_failure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hgeo
