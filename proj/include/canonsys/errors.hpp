#pragma once

#include <stdexcept>
#include <string>

namespace canonsys {

/// Base of all domain errors. `code()` is the machine-readable kind emitted by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define CANONSYS_DEFINE_ERROR(Name)                                    \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  };

CANONSYS_DEFINE_ERROR(StepSizeUnderflow)
CANONSYS_DEFINE_ERROR(BracketFailure)
CANONSYS_DEFINE_ERROR(DerivativeMismatch)
CANONSYS_DEFINE_ERROR(IndexingViolation)
CANONSYS_DEFINE_ERROR(NotCanonicalForm)
CANONSYS_DEFINE_ERROR(ACRequired)
CANONSYS_DEFINE_ERROR(ConfigError)
CANONSYS_DEFINE_ERROR(AssertionFailure)
CANONSYS_DEFINE_ERROR(IOError)

#undef CANONSYS_DEFINE_ERROR

}  // namespace canonsys
