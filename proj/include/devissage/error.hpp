#pragma once

#include <stdexcept>
#include <string>

namespace devissage {

enum class ErrorKind {
  UnsupportedRing,
  ZeroElement,
  NotAUnit,
  ParseError,
  ShapeMismatch,
  NotAComplex,
  IllFormedMorphism,
  TargetMismatch,
  NotFiniteLength,
  NotQuasiIso,
  NotAnIsomorphism,
  HomologyNotInA,
  IncompatibleAugmentations,
  NotALagrangian,
  WindowAlreadyMinimal,
  ReductionStepFailed,
  UnknownKind,
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

}  // namespace devissage
