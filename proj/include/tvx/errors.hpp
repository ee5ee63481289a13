// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_ERRORS_HPP
#define TVX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tvx {

// Base class for every error this library throws on purpose. The CLI maps
// InputError-derived types to exit code 2, VerificationError to 3, and
// anything else to 4.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InputError : Error {
  using Error::Error;
};

struct VerificationError : Error {
  using Error::Error;
};

// ring
struct NonResidue : InputError { using InputError::InputError; };
struct EvenPrime : InputError { using InputError::InputError; };
struct NonUnit : InputError { using InputError::InputError; };
struct ModulusMismatch : InputError { using InputError::InputError; };
struct DenominatorNotUnit : InputError { using InputError::InputError; };
struct DivideByZero : InputError { using InputError::InputError; };
struct NotSquarefree : InputError { using InputError::InputError; };

// poly
struct SyntaxError : InputError {
  SyntaxError(const std::string& what, std::size_t line, std::size_t col)
      : InputError(what + " at line " + std::to_string(line) + ", column " +
                   std::to_string(col)),
        line(line), col(col) {}
  std::size_t line, col;
};
struct UnknownVariable : InputError { using InputError::InputError; };
struct CoefficientNotInRing : InputError { using InputError::InputError; };
struct NotHomogeneous : InputError { using InputError::InputError; };
struct DimensionMismatch : InputError { using InputError::InputError; };
struct SingularMatrix : InputError { using InputError::InputError; };

// vgeom
struct NotZeroDimensional : InputError { using InputError::InputError; };
struct NotACurve : InputError { using InputError::InputError; };
struct NotASurface : InputError { using InputError::InputError; };
struct SingularPoint : InputError { using InputError::InputError; };
struct NotStabilized : VerificationError { using VerificationError::VerificationError; };
struct NoLift : Error { using Error::Error; };
struct SamplingExhausted : Error { using Error::Error; };

// lift
struct SingularJacobian : InputError { using InputError::InputError; };
struct Inconsistent : VerificationError { using VerificationError::VerificationError; };
struct UnderDetermined : Error { using Error::Error; };

// recog
struct PrecisionTooLow : InputError { using InputError::InputError; };
struct DependentRows : InputError { using InputError::InputError; };
struct NotFound : VerificationError {
  explicit NotFound(const std::string& what, std::size_t index = 0)
      : VerificationError(what), index(index) {}
  std::size_t index;  // first failing entry for vector recognition
};

// search
struct HilbertNotConstant : VerificationError { using VerificationError::VerificationError; };
struct RecognitionFailed : VerificationError { using VerificationError::VerificationError; };
struct LiftFailed : VerificationError { using VerificationError::VerificationError; };
struct NoEquivariantSolution : VerificationError { using VerificationError::VerificationError; };
struct IncompatiblePattern : InputError { using InputError::InputError; };
struct EmptyAnsatz : VerificationError { using VerificationError::VerificationError; };

}  // namespace tvx

#endif
