#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrascope/text/lexicon.hpp"

namespace narrascope::text {

struct AnnotatedToken {
  std::string surface;
  Pos pos = Pos::kOther;
  std::string lemma;  // case-folded, no whitespace

  bool operator==(const AnnotatedToken&) const = default;
};

// Part-of-speech tagging plus lemmatization. annotate() is total (one output
// per input token) and forces "#tag"/"@handle" tokens to PROPN with the
// case-folded surface as lemma, whatever the backend says.
class PosAnnotator {
 public:
  virtual ~PosAnnotator() = default;

  std::vector<AnnotatedToken> annotate(
      std::span<const std::string> tokens) const;

  virtual std::string name() const = 0;

 protected:
  // Must return exactly tokens.size() entries.
  virtual std::vector<AnnotatedToken> tag(
      std::span<const std::string> tokens) const = 0;
};

// Lexicon lookup with a one-token context rule for ambiguous words, and
// suffix rules for words the lexicon does not know.
class BaselineAnnotator final : public PosAnnotator {
 public:
  explicit BaselineAnnotator(
      std::shared_ptr<const Lexicon> lexicon = Lexicon::bundled());

  std::string name() const override { return "baseline"; }

 protected:
  std::vector<AnnotatedToken> tag(
      std::span<const std::string> tokens) const override;

 private:
  std::shared_ptr<const Lexicon> lexicon_;
};

// Suffix rules used for unknown words (exposed for tests).
std::string verb_lemma_by_rule(std::string_view folded);
std::string noun_lemma_by_rule(std::string_view folded);
// VERB for -ing/-ed shaped words, NOUN otherwise.
AnnotatedToken guess_unknown(std::string_view surface);

// External tagger over a line protocol: one token per stdin line, one
// "POS<TAB>lemma" stdout line back. Requests are serialized per process; a
// dead or misbehaving process raises Error(kTaggerFailure) and is restarted
// on the next call.
class SubprocessAnnotator final : public PosAnnotator {
 public:
  explicit SubprocessAnnotator(std::vector<std::string> argv,
                               int timeout_ms = 5000);
  ~SubprocessAnnotator() override;

  std::string name() const override;

 protected:
  std::vector<AnnotatedToken> tag(
      std::span<const std::string> tokens) const override;

 private:
  struct Process;

  std::vector<std::string> argv_;
  int timeout_ms_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<Process> process_;
};

// Uses `primary`, and `fallback` whenever the primary raises TaggerFailure.
class FallbackAnnotator final : public PosAnnotator {
 public:
  FallbackAnnotator(std::shared_ptr<const PosAnnotator> primary,
                    std::shared_ptr<const PosAnnotator> fallback);

  std::string name() const override;

 protected:
  std::vector<AnnotatedToken> tag(
      std::span<const std::string> tokens) const override;

 private:
  std::shared_ptr<const PosAnnotator> primary_;
  std::shared_ptr<const PosAnnotator> fallback_;
};

// "baseline", "subprocess:CMD ARG..." (strict) or
// "subprocess+baseline:CMD ARG..." (falls back to the baseline).
// Throws Error(kInvalidArgument) for anything else.
std::shared_ptr<const PosAnnotator> make_annotator(std::string_view selection);

}  // namespace narrascope::text
