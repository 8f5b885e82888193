#pragma once

// JSON-lines records for generated questions and multiple-choice questions.
// Query patterns are written as [subject, predicate, object] string triples
// where the variable is "?x" and literals keep their surrounding quotes.

#include <cstdint>
#include <string>
#include <string_view>

#include "kgquiz/mcq.hpp"
#include "kgquiz/question_gen.hpp"

namespace kgq {

std::string question_record(const GeneratedQuestion& q, std::uint64_t seed);
std::string mcq_record(const MCQ& mcq, std::uint64_t seed);

// Throws MalformedLine on invalid JSON or missing fields.
GeneratedQuestion parse_question_record(std::string_view line);

}  // namespace kgq
