#pragma once

#include <stdexcept>
#include <string>

namespace perplex {

/// Base of every error the library raises. `kind()` is the stable name used
/// in CLI reports.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PERPLEX_DEFINE_ERROR(Name)                                         \
  class Name : public DomainError {                                        \
   public:                                                                 \
    explicit Name(const std::string& what) : DomainError(#Name, what) {}   \
  };

PERPLEX_DEFINE_ERROR(InvalidParams)
PERPLEX_DEFINE_ERROR(DegenerateParams)
PERPLEX_DEFINE_ERROR(NotAUnit)
PERPLEX_DEFINE_ERROR(ZeroInput)
PERPLEX_DEFINE_ERROR(DegenerateDirection)
PERPLEX_DEFINE_ERROR(IllConditioned)
PERPLEX_DEFINE_ERROR(NotSeparated)
PERPLEX_DEFINE_ERROR(GcrViolated)
PERPLEX_DEFINE_ERROR(FitFailed)
PERPLEX_DEFINE_ERROR(InsufficientSamples)
PERPLEX_DEFINE_ERROR(DegenerateAlgebra)
PERPLEX_DEFINE_ERROR(MaskTooCoarse)
PERPLEX_DEFINE_ERROR(EmptyFiber)
PERPLEX_DEFINE_ERROR(InvalidArgument)
PERPLEX_DEFINE_ERROR(ParseError)

#undef PERPLEX_DEFINE_ERROR

}  // namespace perplex
