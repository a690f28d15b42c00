#include "medgkrp/prompt.hpp"

#include "medgkrp/digest.hpp"
#include "medgkrp/errors.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace medgkrp {

std::string to_string(TemplateName name) {
    switch (name) {
        case TemplateName::system: return "system";
        case TemplateName::expand_causes: return "expand_causes";
        case TemplateName::expand_effects: return "expand_effects";
        case TemplateName::edge_check: return "edge_check";
        case TemplateName::nn_match: return "nn_match";
    }
    return "unknown";
}

namespace {

constexpr const char* kSystem =
    "You are a helpful assistant for causal inference and causal reasoning "
    "about medical questions. You are always specific in your answers. You "
    "always format your answers consistently and name all medical terms in "
    "the correct and accepted medical lexicon. You understand the differences "
    "between direct and indirect causality and acknowledge these differences "
    "when formulating an answer. You utilize a counterfactual model of causal "
    "inference when formulating a response.";

constexpr const char* kExpandCauses =
    "A directed knowledge graph that you generated is surrounded in XML tags "
    "and provided below. This directed knowledge graph is formatted as a list "
    "of edges like so: ['a causes b', 'b causes c', etc]. The knowledge graph "
    "you generated is as follows:\n"
    "\n"
    "<Begin Knowledge Graph>\n"
    "{edges:}\n"
    "</End Knowledge Graph>\n"
    "\n"
    "Given the directed knowledge graph above that you generated, up to "
    "{n_max:} factors that directly cause {concept:}. These factors do not "
    "need to be in the knowledge graph above, but can be. If a factor you "
    "answer with is in the knowledge graph above, in your response, name it "
    "exactly as it is named in the graph above. Do not answer with any "
    "factors that only indirectly cause {concept:}. In your final answer, "
    "surround the medical name of each cause in square brackets characters. "
    "Do not include acronyms or abbreviations in your answer. Utilize a "
    "counterfactual model of causal inference when formulating a response. Be "
    "as specific as possible. Let's think step by step like a medical expert.";

constexpr const char* kExpandEffects =
    "A directed knowledge graph that you generated is surrounded in XML tags "
    "and provided below. This directed knowledge graph is formatted as a list "
    "of edges like so: ['a causes b', 'b causes c', etc]. The knowledge graph "
    "you generated is as follows:\n"
    "\n"
    "<Begin Knowledge Graph>\n"
    "{edges:}\n"
    "</End Knowledge Graph>\n"
    "\n"
    "Given the directed knowledge graph above that you generated, List up to "
    "{n_max:} medical concepts directly caused by {concept:}. These factors "
    "do not need to be in the knowledge graph above, but can be. If a factor "
    "you answer with is in the knowledge graph above, in your response, name "
    "it exactly as it is named in the graph above. Do not answer with any "
    "factors that only are indirectly caused by {concept:}. In your final "
    "answer, surround the medical name of each medical concept that "
    "{concept:} causes in square brackets characters. Do not include "
    "acronyms or abbreviations in your answer. Utilize a counterfactual "
    "model of causal inference when formulating a response. Be as specific "
    "as possible. Let's think step by step like a medical expert.";

constexpr const char* kEdgeCheck =
    "Does {node0:} directly cause {node1:}? Your answer must be one of the "
    "following: [yes] / [no]. Surround your final [yes] / [no] answer in "
    "square brackets characters. If there is only an indirect causal "
    "relationship as opposed to a direct one, answer with [no]. Utilize a "
    "counterfactual model of causal inference. Assume no other risk factors "
    "are present. Let's think step by step. Be concise in your response.";

constexpr const char* kNnMatch =
    "Is the concept ['{original}'] identical in meaning to any of the "
    "concepts in the following list?\n"
    "\n"
    "Concepts: {retrieved}\n"
    "\n"
    "If so, reply with the name of one concept in the list identical in "
    "meaning to {original} as it is written in the list. If there is more "
    "than one item of the same meaning in the list, answer with the concept "
    "which best fits and which is in proper medical lexicon. Provide one and "
    "only one answer. If no items in the list are identical in meaning to "
    "{original}, provide an empty set of square brackets. Surround your "
    "final answer in square brackets characters. It is very important that "
    "you do this or else your answer will not be processed. It is also very "
    "important that you provide only one answer and your answer as it is "
    "written in the list.";

const std::array<TemplateName, 5> kAllTemplates = {
    TemplateName::system, TemplateName::expand_causes,
    TemplateName::expand_effects, TemplateName::edge_check,
    TemplateName::nn_match};

std::string builtin_body(TemplateName name) {
    switch (name) {
        case TemplateName::system: return kSystem;
        case TemplateName::expand_causes: return kExpandCauses;
        case TemplateName::expand_effects: return kExpandEffects;
        case TemplateName::edge_check: return kEdgeCheck;
        case TemplateName::nn_match: return kNnMatch;
    }
    throw TemplateError("unknown template");
}

std::string strip_trailing_whitespace(std::string s) {
    while (!s.empty() &&
           std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    return s;
}

} // namespace

std::string substitute_placeholders(std::string_view tmpl,
                                    const Bindings& bindings) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] != '{') {
            out.push_back(tmpl[i++]);
            continue;
        }
        // Try to read {name} or {name:}.
        std::size_t j = i + 1;
        while (j < tmpl.size() &&
               (std::isalnum(static_cast<unsigned char>(tmpl[j])) ||
                tmpl[j] == '_'))
            ++j;
        std::size_t name_end = j;
        if (j < tmpl.size() && tmpl[j] == ':') ++j;
        if (name_end == i + 1 || j >= tmpl.size() || tmpl[j] != '}') {
            out.push_back(tmpl[i++]); // not a placeholder, literal brace
            continue;
        }
        std::string name(tmpl.substr(i + 1, name_end - i - 1));
        auto it = bindings.find(name);
        if (it == bindings.end())
            throw TemplateError("missing binding for placeholder: " + name);
        out += it->second;
        i = j + 1;
    }
    return out;
}

PromptLibrary::PromptLibrary() {
    for (TemplateName n : kAllTemplates) bodies_[n] = builtin_body(n);
}

PromptLibrary::PromptLibrary(const std::filesystem::path& dir)
    : PromptLibrary() {
    for (TemplateName n : kAllTemplates) {
        auto path = dir / (to_string(n) + ".txt");
        std::ifstream in(path);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        bodies_[n] = strip_trailing_whitespace(buf.str());
    }
}

const std::string& PromptLibrary::body(TemplateName name) const {
    return bodies_.at(name);
}

std::string PromptLibrary::render(TemplateName name,
                                  const Bindings& bindings) const {
    return substitute_placeholders(bodies_.at(name), bindings);
}

std::string PromptLibrary::digest(TemplateName name) const {
    return sha256_hex(bodies_.at(name));
}

} // namespace medgkrp
