#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace narrascope {

enum class ErrorKind {
  kInvalidArgument,
  kNotFound,
  kSourceUnavailable,
  kMalformedRecord,
  kStorageFailure,
  kTaggerFailure,
  kInsufficientVocabulary,
  kDegenerateTable,
  kConvergenceFailure,
  kInvalidSpec,
  kEmptyTermSet,
};

std::string_view to_string(ErrorKind kind);

// Sparse-data conditions that clear up as more posts arrive.
constexpr bool is_not_enough_data(ErrorKind kind) {
  return kind == ErrorKind::kInsufficientVocabulary ||
         kind == ErrorKind::kDegenerateTable;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace narrascope
