#include "kgquiz/error.hpp"

namespace kgq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::CyclicHierarchy: return "CyclicHierarchy";
    case ErrorKind::UnknownType: return "UnknownType";
    case ErrorKind::UnknownEntity: return "UnknownEntity";
    case ErrorKind::MalformedQuery: return "MalformedQuery";
    case ErrorKind::EmptyTopic: return "EmptyTopic";
    case ErrorKind::UnbalancedBracket: return "UnbalancedBracket";
    case ErrorKind::EmptyEntityId: return "EmptyEntityId";
    case ErrorKind::EmptySurface: return "EmptySurface";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::EmptyQuestionEntities: return "EmptyQuestionEntities";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::SingleClassData: return "SingleClassData";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MalformedModel: return "MalformedModel";
    case ErrorKind::NoSalientType: return "NoSalientType";
    case ErrorKind::QueryGenerationFailed: return "QueryGenerationFailed";
    case ErrorKind::MissingLexiconEntry: return "MissingLexiconEntry";
    case ErrorKind::NoAdmissibleRelaxation: return "NoAdmissibleRelaxation";
    case ErrorKind::NoCandidates: return "NoCandidates";
    case ErrorKind::InsufficientCandidates: return "InsufficientCandidates";
    case ErrorKind::EmptyDistractorSet: return "EmptyDistractorSet";
    case ErrorKind::TooFewExamples: return "TooFewExamples";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::AllTied: return "AllTied";
    case ErrorKind::RaggedMatrix: return "RaggedMatrix";
    case ErrorKind::PerfectExpectedAgreement: return "PerfectExpectedAgreement";
  }
  return "Unknown";
}

}  // namespace kgq
