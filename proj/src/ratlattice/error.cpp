#include "bsdtwist/error.hpp"

namespace bsdtwist {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::SpanMismatch: return "SpanMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::NotFundamental: return "NotFundamental";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotPrime: return "NotPrime";
    case Errc::NoMatch: return "NoMatch";
    case Errc::ZeroTwist: return "ZeroTwist";
    case Errc::NotPrimeLevel: return "NotPrimeLevel";
    case Errc::BadReduction: return "BadReduction";
    case Errc::PrecisionLoss: return "PrecisionLoss";
    case Errc::RankPositive: return "RankPositive";
    case Errc::RoundingAmbiguous: return "RoundingAmbiguous";
    case Errc::MassOverflow: return "MassOverflow";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::EigenvalueMismatch: return "EigenvalueMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::RankPositiveTwist: return "RankPositiveTwist";
    case Errc::ZeroLValue: return "ZeroLValue";
    case Errc::IoError: return "IoError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace bsdtwist
