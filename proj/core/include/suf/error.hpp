#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace suf {

enum class ErrorCode {
  MalformedLine,
  MissingEvent,
  DuplicateEvent,
  IoFailure,
  SchemaMismatch,
  UnknownClass,
  HeaderMismatch,
  EventNotOnDevice,
  TooFewRows,
  TooFewValues,
  FeatureMismatch,
  EmptyTable,
  EmptyCorpus,
  UnknownCharacter,
  DimensionMismatch,
  IndexOutOfVocabulary,
  LabelOutOfRange,
  ShapeMismatch,
  EmptyDataset,
  VocabularyMismatch,
  VersionMismatch,
  CorruptDocument,
  EmptyMatrix,
  DegenerateProfile,
  UnknownLevel,
  UnknownProfile,
  UsageError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `code()` is stable and is what the
/// CLI prints as the machine-parsable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace suf
