#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace medgkrp {

enum class TemplateName {
    system,
    expand_causes,  // "up to {n_max:} factors that directly cause {concept:}"
    expand_effects, // "List up to {n_max:} medical concepts directly caused by"
    edge_check,
    nn_match,
};

std::string to_string(TemplateName name);

using Bindings = std::map<std::string, std::string>;

// The five prompt templates, loaded from plain-text files so they can be
// edited without a rebuild. Built-in copies are used for any file that is
// absent. Placeholders look like {edges:} or {original}; substitution is
// byte-exact and a leftover placeholder after rendering is an error.
class PromptLibrary {
public:
    // Built-in templates only.
    PromptLibrary();
    // Overlay *.txt files from a directory onto the built-ins.
    explicit PromptLibrary(const std::filesystem::path& dir);

    const std::string& body(TemplateName name) const;
    std::string render(TemplateName name, const Bindings& bindings) const;

    // Hex digest of a template body, recorded in run manifests.
    std::string digest(TemplateName name) const;

private:
    std::map<TemplateName, std::string> bodies_;
};

// Exposed for direct testing of the placeholder grammar.
std::string substitute_placeholders(std::string_view tmpl,
                                    const Bindings& bindings);

} // namespace medgkrp
