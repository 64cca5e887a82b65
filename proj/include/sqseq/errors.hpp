#pragma once

#include <stdexcept>
#include <string>
#include <typeinfo>

namespace sqseq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (e.g. sqrt of a negative).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Overdetermined data that does not fit the requested model.
class InconsistentData : public Error {
 public:
  using Error::Error;
};

/// y^2 = a x^3 + b x + c with a = 0, or a singular model where a curve is required.
class DegenerateModel : public Error {
 public:
  using Error::Error;
};

/// Sequence parameter t lies in the degeneracy set.
class DegenerateParameter : public Error {
 public:
  using Error::Error;
};

class OffCurve : public Error {
 public:
  using Error::Error;
};

class NotASquare : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// A birational map is undefined at the requested point.
class ExceptionalPoint : public Error {
 public:
  using Error::Error;
};

class TorsionSeed : public Error {
 public:
  using Error::Error;
};

class TorsionInput : public Error {
 public:
  using Error::Error;
};

/// A coordinate outgrew the configured digit guard.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Class name of an error, for diagnostics.
inline const char* error_name(const Error& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const SingularSystem*>(&e)) return "SingularSystem";
  if (dynamic_cast<const InconsistentData*>(&e)) return "InconsistentData";
  if (dynamic_cast<const DegenerateModel*>(&e)) return "DegenerateModel";
  if (dynamic_cast<const DegenerateParameter*>(&e)) return "DegenerateParameter";
  if (dynamic_cast<const OffCurve*>(&e)) return "OffCurve";
  if (dynamic_cast<const NotASquare*>(&e)) return "NotASquare";
  if (dynamic_cast<const SingularJacobian*>(&e)) return "SingularJacobian";
  if (dynamic_cast<const ExceptionalPoint*>(&e)) return "ExceptionalPoint";
  if (dynamic_cast<const TorsionSeed*>(&e)) return "TorsionSeed";
  if (dynamic_cast<const TorsionInput*>(&e)) return "TorsionInput";
  if (dynamic_cast<const SizeLimit*>(&e)) return "SizeLimit";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
  return "Error";
}

}  // namespace sqseq
