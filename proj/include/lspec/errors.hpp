#pragma once

#include <stdexcept>
#include <string>

namespace lspec {

// Base for every error the library raises. kind() is the stable name used in
// the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define LSPEC_ERROR(Name)                                                      \
  struct Name : Error {                                                        \
    explicit Name(const std::string& m) : Error(#Name, m) {}                   \
  };

LSPEC_ERROR(SignatureError)
LSPEC_ERROR(DomainError)
LSPEC_ERROR(EscapeError)
LSPEC_ERROR(StepError)
LSPEC_ERROR(RadiusError)
LSPEC_ERROR(FitError)
LSPEC_ERROR(GridError)
LSPEC_ERROR(BranchError)
LSPEC_ERROR(PoleError)
LSPEC_ERROR(ConvergenceError)
LSPEC_ERROR(TailError)
LSPEC_ERROR(ToleranceError)
LSPEC_ERROR(DimensionError)
LSPEC_ERROR(ConditioningError)
LSPEC_ERROR(MemoryError)
LSPEC_ERROR(CharacteristicError)
LSPEC_ERROR(ConfigError)

#undef LSPEC_ERROR

}  // namespace lspec
