#include "suf/error.hpp"

namespace suf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::MissingEvent: return "MissingEvent";
    case ErrorCode::DuplicateEvent: return "DuplicateEvent";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::EventNotOnDevice: return "EventNotOnDevice";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::TooFewValues: return "TooFewValues";
    case ErrorCode::FeatureMismatch: return "FeatureMismatch";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnknownCharacter: return "UnknownCharacter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfVocabulary: return "IndexOutOfVocabulary";
    case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::VocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptDocument: return "CorruptDocument";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DegenerateProfile: return "DegenerateProfile";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::UnknownProfile: return "UnknownProfile";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace suf
