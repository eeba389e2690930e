#include "narrascope/error.hpp"

namespace narrascope {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kNotFound: return "NotFound";
    case ErrorKind::kSourceUnavailable: return "SourceUnavailable";
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kStorageFailure: return "StorageFailure";
    case ErrorKind::kTaggerFailure: return "TaggerFailure";
    case ErrorKind::kInsufficientVocabulary: return "InsufficientVocabulary";
    case ErrorKind::kDegenerateTable: return "DegenerateTable";
    case ErrorKind::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
    case ErrorKind::kEmptyTermSet: return "EmptyTermSet";
  }
  return "Unknown";
}

}  // namespace narrascope
