#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgq {

// Every domain failure raised by the library. The CLI maps these to exit
// code 1 and prints `<Kind>: <message>`.
enum class ErrorKind {
  InvalidArgument,
  IoError,
  // kg_store
  MalformedLine,
  CyclicHierarchy,
  UnknownType,
  UnknownEntity,
  MalformedQuery,
  EmptyTopic,
  // corpus_miner
  UnbalancedBracket,
  EmptyEntityId,
  EmptySurface,
  // stats_features
  EmptyGraph,
  EmptyQuestionEntities,
  InvalidInstance,
  // difficulty_model
  SingleClassData,
  DimensionMismatch,
  MalformedModel,
  // question_gen / verbalizer
  NoSalientType,
  QueryGenerationFailed,
  MissingLexiconEntry,
  // mcq
  NoAdmissibleRelaxation,
  NoCandidates,
  InsufficientCandidates,
  EmptyDistractorSet,
  // eval_harness
  TooFewExamples,
  LengthMismatch,
  AllTied,
  RaggedMatrix,
  PerfectExpectedAgreement,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace kgq
