#pragma once

#include <stdexcept>
#include <string>

namespace medgkrp {

// Thrown when an LLM response cannot be parsed into the expected answer
// grammar. Carries the raw text so callers can log it.
class MalformedResponse : public std::runtime_error {
public:
    MalformedResponse(std::string reason, std::string raw)
        : std::runtime_error(reason + ": \"" + raw + "\""),
          raw_(std::move(raw)) {}

    const std::string& raw_text() const { return raw_; }

private:
    std::string raw_;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid document on deserialize / ground-truth ingest.
class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Backend/transport failure after retries were exhausted.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace medgkrp
