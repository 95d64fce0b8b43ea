#pragma once

#include <stdexcept>
#include <string>

namespace melorig {

enum class Errc {
  // MIDI / ingest
  BadMagic,
  UnsupportedFormat,
  TruncatedChunk,
  InvalidVarLen,
  EmptyPiece,
  BadHeader,
  MissingFile,
  // transitions / originality
  UndefinedRow,
  BadOrder,
  TooShort,
  // popularity
  MissingTitle,
  NetworkError,
  PatternMiss,
  // stats
  LengthMismatch,
  DegenerateX,
  TooFewSamples,
  ZeroVariance,
  SingularSystem,
  BadDf,
  // report / pipeline
  MissingFields,
  EmptyGroup,
  IoError,
  BadConfig,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::TruncatedChunk: return "TruncatedChunk";
    case Errc::InvalidVarLen: return "InvalidVarLen";
    case Errc::EmptyPiece: return "EmptyPiece";
    case Errc::BadHeader: return "BadHeader";
    case Errc::MissingFile: return "MissingFile";
    case Errc::UndefinedRow: return "UndefinedRow";
    case Errc::BadOrder: return "BadOrder";
    case Errc::TooShort: return "TooShort";
    case Errc::MissingTitle: return "MissingTitle";
    case Errc::NetworkError: return "NetworkError";
    case Errc::PatternMiss: return "PatternMiss";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateX: return "DegenerateX";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::BadDf: return "BadDf";
    case Errc::MissingFields: return "MissingFields";
    case Errc::EmptyGroup: return "EmptyGroup";
    case Errc::IoError: return "IoError";
    case Errc::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

// Common exception type; the code distinguishes failure classes that callers
// (and tests) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace melorig
