#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace medgkrp {

// Extraction of bracketed answers from free-form LLM text. The scanner
// collects innermost balanced [...] spans; stray unbalanced brackets are
// ignored. Chain-of-thought preambles routinely contain earlier bracketed
// text, so verdict/match parsing keys on the last span.

// All innermost balanced spans in order of appearance, contents untrimmed.
// Empty spans ("[]") are included.
std::vector<std::string> bracket_spans(std::string_view raw);

enum class Verdict { yes, no };

// Ordered concept list: spans trimmed, empties dropped, case-insensitive
// dedup keeping the first occurrence, truncated to `limit` items.
// Throws MalformedResponse when non-empty text contains no bracketed span.
std::vector<std::string> parse_concepts(std::string_view raw, int limit);

// Last bracketed span must be "yes" or "no" (case-insensitive, trimmed).
Verdict parse_verdict(std::string_view raw);

// Last bracketed span; empty brackets mean "no match" (nullopt). A non-empty
// span must equal one of the candidates case-insensitively and the
// candidate's stored form is returned. Throws MalformedResponse otherwise.
std::optional<std::string> parse_match(std::string_view raw,
                                       const std::vector<std::string>& candidates);

} // namespace medgkrp
