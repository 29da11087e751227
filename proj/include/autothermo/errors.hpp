#pragma once

#include <stdexcept>
#include <string>

namespace autothermo {

/// Broad failure classes; the CLI maps each onto an exit code.
enum class ErrorClass { usage, physics, io, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

#define AUTOTHERMO_DEFINE_ERROR(Name, Class)                                  \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, what) {} \
  }

AUTOTHERMO_DEFINE_ERROR(IndexError, usage);
AUTOTHERMO_DEFINE_ERROR(DimensionMismatch, usage);
AUTOTHERMO_DEFINE_ERROR(BadSpec, usage);
AUTOTHERMO_DEFINE_ERROR(UnknownKey, usage);
AUTOTHERMO_DEFINE_ERROR(UnknownPreset, usage);
AUTOTHERMO_DEFINE_ERROR(NotHermitian, physics);
AUTOTHERMO_DEFINE_ERROR(InvalidState, physics);
AUTOTHERMO_DEFINE_ERROR(NonPhysicalState, physics);
AUTOTHERMO_DEFINE_ERROR(StepTooLarge, physics);
AUTOTHERMO_DEFINE_ERROR(TruncationTooSmall, physics);
AUTOTHERMO_DEFINE_ERROR(DegenerateGround, physics);
AUTOTHERMO_DEFINE_ERROR(EntropyOutOfRange, physics);
AUTOTHERMO_DEFINE_ERROR(InvariantViolation, physics);
AUTOTHERMO_DEFINE_ERROR(IoError, io);

#undef AUTOTHERMO_DEFINE_ERROR

/// Malformed configuration text; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(ErrorClass::usage, "line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace autothermo
