#pragma once

#include <stdexcept>
#include <string>

namespace bsdtwist {

enum class Errc {
  SpanMismatch,
  RankDeficient,
  ZeroInput,
  NotFundamental,
  NotCoprime,
  NotPrime,
  NoMatch,
  ZeroTwist,
  NotPrimeLevel,
  BadReduction,
  PrecisionLoss,
  RankPositive,
  RoundingAmbiguous,
  MassOverflow,
  ZeroVector,
  EigenvalueMismatch,
  ParseError,
  ValidationError,
  RankPositiveTwist,
  ZeroLValue,
  IoError,
  Internal,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace bsdtwist
