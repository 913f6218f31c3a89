#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cobase {

enum class Errc {
  NonPrime,
  DegreeTooLarge,
  SpecMismatch,
  DivisionByZero,
  CapExceeded,
  SingularGenerator,
  OrderUnknown,
  SearchSpaceTooLarge,
  NotEnumerated,
  PreconditionViolated,
  DimensionMismatch,
  LabelCountMismatch,
  NotABase,
  ScalarsMissing,
  NotCoprime,
  ShapeExcluded,
  BadZ1,
  TheoremViolation,
  NotABaseForH,
  CoverIsWholeSpace,
  RootOfUnityMissing,
  NotMonomial,
  CaseNotCovered,
  EvenCharacteristic,
  BadIndexing,
  WrongCharacterClass,
  ParseError,
  OrderMismatch,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::SpecMismatch: return "SpecMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::SingularGenerator: return "SingularGenerator";
    case Errc::OrderUnknown: return "OrderUnknown";
    case Errc::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case Errc::NotEnumerated: return "NotEnumerated";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LabelCountMismatch: return "LabelCountMismatch";
    case Errc::NotABase: return "NotABase";
    case Errc::ScalarsMissing: return "ScalarsMissing";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::ShapeExcluded: return "ShapeExcluded";
    case Errc::BadZ1: return "BadZ1";
    case Errc::TheoremViolation: return "TheoremViolation";
    case Errc::NotABaseForH: return "NotABaseForH";
    case Errc::CoverIsWholeSpace: return "CoverIsWholeSpace";
    case Errc::RootOfUnityMissing: return "RootOfUnityMissing";
    case Errc::NotMonomial: return "NotMonomial";
    case Errc::CaseNotCovered: return "CaseNotCovered";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::BadIndexing: return "BadIndexing";
    case Errc::WrongCharacterClass: return "WrongCharacterClass";
    case Errc::ParseError: return "ParseError";
    case Errc::OrderMismatch: return "OrderMismatch";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Thrown when an enumeration would grow past its configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(std::uint64_t partial, std::uint64_t cap)
      : Error(Errc::CapExceeded, "enumeration reached " + std::to_string(partial) +
                                     " elements (cap " + std::to_string(cap) + ")"),
        partial_(partial),
        cap_(cap) {}

  std::uint64_t partial_count() const noexcept { return partial_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t partial_;
  std::uint64_t cap_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(Errc::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace cobase
