#include "medgkrp/answer_parse.hpp"

#include "medgkrp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace medgkrp {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

} // namespace

std::vector<std::string> bracket_spans(std::string_view raw) {
    std::vector<std::string> spans;
    std::vector<std::size_t> open_stack;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '[') {
            open_stack.push_back(i);
        } else if (raw[i] == ']') {
            if (open_stack.empty()) continue; // stray close, ignore
            std::size_t open = open_stack.back();
            open_stack.pop_back();
            std::string_view inner = raw.substr(open + 1, i - open - 1);
            // Only innermost spans: skip if the content still holds brackets
            // (those came from already-consumed inner spans).
            if (inner.find('[') == std::string_view::npos &&
                inner.find(']') == std::string_view::npos)
                spans.emplace_back(inner);
        }
    }
    return spans;
}

std::vector<std::string> parse_concepts(std::string_view raw, int limit) {
    auto spans = bracket_spans(raw);
    if (spans.empty() && !trim(raw).empty())
        throw MalformedResponse("no bracketed concepts found",
                                std::string(raw));
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& span : spans) {
        std::string item = trim(span);
        if (item.empty()) continue;
        if (!seen.insert(lower(item)).second) continue;
        out.push_back(std::move(item));
        if (static_cast<int>(out.size()) == limit) break;
    }
    return out;
}

Verdict parse_verdict(std::string_view raw) {
    auto spans = bracket_spans(raw);
    if (!spans.empty()) {
        std::string last = lower(trim(spans.back()));
        if (last == "yes") return Verdict::yes;
        if (last == "no") return Verdict::no;
    }
    throw MalformedResponse("no bracketed yes/no verdict", std::string(raw));
}

std::optional<std::string>
parse_match(std::string_view raw, const std::vector<std::string>& candidates) {
    auto spans = bracket_spans(raw);
    if (spans.empty())
        throw MalformedResponse("no bracketed match answer", std::string(raw));
    std::string answer = trim(spans.back());
    if (answer.empty()) return std::nullopt;
    std::string key = lower(answer);
    for (const auto& c : candidates)
        if (lower(trim(c)) == key) return c;
    throw MalformedResponse("bracketed answer matches no candidate",
                            std::string(raw));
}

} // namespace medgkrp
