#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/backend.hpp"
#include "ocrloop/errors.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

// Markers the agent and tests key on. The answer marker is what
// extract_final_answer scans for; the CoT marker is the phrase that
// distinguishes the cot prompt from the plain zero-shot one.
inline constexpr std::string_view kAnswerMarker = "ANSWER:";
inline constexpr std::string_view kCotMarker = "step by step";
inline constexpr std::string_view kNoMemoryPlaceholder = "(no prior reflections)";
inline constexpr std::string_view kNoPlanPlaceholder = "(no plan actions)";

enum class TemplateName { ZeroShot, ZeroShotCot, Reflection, Refinement };

inline std::string to_string(TemplateName n) {
    switch (n) {
        case TemplateName::ZeroShot: return "zero_shot";
        case TemplateName::ZeroShotCot: return "zero_shot_cot";
        case TemplateName::Reflection: return "reflection";
        default: return "refinement";
    }
}

struct PromptTemplate {
    TemplateName name = TemplateName::ZeroShot;
    std::string body;
};

struct TemplateSet {
    std::string system_preamble;
    PromptTemplate zero_shot;
    PromptTemplate zero_shot_cot;
    PromptTemplate reflection;
    PromptTemplate refinement;

    const PromptTemplate& get(TemplateName n) const {
        switch (n) {
            case TemplateName::ZeroShot: return zero_shot;
            case TemplateName::ZeroShotCot: return zero_shot_cot;
            case TemplateName::Reflection: return reflection;
            default: return refinement;
        }
    }

    // Recorded in run metadata so result files pin the exact wording
    // they were produced with.
    std::string hash() const {
        std::uint64_t h = fnv1a(system_preamble);
        h = fnv1a(zero_shot.body, h);
        h = fnv1a(zero_shot_cot.body, h);
        h = fnv1a(reflection.body, h);
        h = fnv1a(refinement.body, h);
        return hex64(h);
    }
};

namespace builtin {

inline const std::string kSystemPreamble =
    "You are a careful OCR assistant. Read the image exactly as printed and "
    "answer the question about it.\n";

inline const std::string kZeroShotBody =
    "Question: {question}\n"
    "\n"
    "Look at the image and answer the question. Reply with the answer only,\n"
    "prefixed by {answer_marker}\n";

inline const std::string kZeroShotCotBody =
    "Question: {question}\n"
    "\n"
    "Look at the image and reason step by step about what it shows before\n"
    "committing to an answer. End with the final answer on its own line,\n"
    "prefixed by {answer_marker}\n";

inline const std::string kReflectionBody =
    "You previously answered a question about this image.\n"
    "\n"
    "Question: {question}\n"
    "\n"
    "Previous answer:\n"
    "{prev_answer}\n"
    "\n"
    "Prior reflections:\n"
    "{memory}\n"
    "\n"
    "Re-inspect the image and critique the previous answer. Point out likely\n"
    "reading mistakes, then propose concrete corrective actions, one per\n"
    "line, each prefixed with STEP:\n";

inline const std::string kRefinementBody =
    "You previously answered a question about this image.\n"
    "\n"
    "Question: {question}\n"
    "\n"
    "Previous answer:\n"
    "{prev_answer}\n"
    "\n"
    "Reflection history:\n"
    "{memory}\n"
    "\n"
    "Corrective actions to apply:\n"
    "{plan}\n"
    "\n"
    "Apply the corrective actions and produce an improved answer. Reply with\n"
    "the final answer only, prefixed by {answer_marker}\n";

}  // namespace builtin

inline TemplateSet builtin_templates() {
    TemplateSet set;
    set.system_preamble = builtin::kSystemPreamble;
    set.zero_shot = {TemplateName::ZeroShot, builtin::kZeroShotBody};
    set.zero_shot_cot = {TemplateName::ZeroShotCot, builtin::kZeroShotCotBody};
    set.reflection = {TemplateName::Reflection, builtin::kReflectionBody};
    set.refinement = {TemplateName::Refinement, builtin::kRefinementBody};
    return set;
}

namespace detail {

inline std::string read_template_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw TemplateError("missing template file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace detail

// Loads a bundle from a directory of plain-text files, one per
// template. system.txt is optional and defaults to the builtin
// preamble.
inline TemplateSet load_template_set(const std::string& dir) {
    TemplateSet set;
    set.zero_shot = {TemplateName::ZeroShot, detail::read_template_file(dir + "/zero_shot.txt")};
    set.zero_shot_cot = {TemplateName::ZeroShotCot,
                         detail::read_template_file(dir + "/zero_shot_cot.txt")};
    set.reflection = {TemplateName::Reflection,
                      detail::read_template_file(dir + "/reflection.txt")};
    set.refinement = {TemplateName::Refinement,
                      detail::read_template_file(dir + "/refinement.txt")};
    std::ifstream sys(dir + "/system.txt", std::ios::binary);
    if (sys.good()) {
        std::ostringstream buf;
        buf << sys.rdbuf();
        set.system_preamble = buf.str();
    } else {
        set.system_preamble = builtin::kSystemPreamble;
    }
    return set;
}

// "default" is the embedded bundle; anything else names a directory.
inline TemplateSet resolve_template_set(const std::string& identifier) {
    if (identifier.empty() || identifier == "default") return builtin_templates();
    return load_template_set(identifier);
}

// Substitutes {placeholder} tokens in a single pass; substituted values
// are never rescanned, so reflection text containing braces cannot
// inject placeholders. Unbound placeholders are an error.
inline std::string substitute(const std::string& body,
                              const std::map<std::string, std::string>& bindings) {
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] != '{') {
            out += body[i++];
            continue;
        }
        std::size_t j = i + 1;
        while (j < body.size() && (std::islower(static_cast<unsigned char>(body[j])) || body[j] == '_'))
            ++j;
        if (j > i + 1 && j < body.size() && body[j] == '}') {
            const std::string key = body.substr(i + 1, j - i - 1);
            const auto it = bindings.find(key);
            if (it == bindings.end())
                throw TemplateError("unbound placeholder {" + key + "}");
            out += it->second;
            i = j + 1;
        } else {
            out += body[i++];  // a literal brace, not a placeholder
        }
    }
    return out;
}

inline std::vector<Message> render(const PromptTemplate& tmpl,
                                   const std::map<std::string, std::string>& bindings,
                                   const std::string& system_preamble) {
    std::vector<Message> messages;
    if (!system_preamble.empty()) messages.push_back({Role::System, system_preamble});
    messages.push_back({Role::User, substitute(tmpl.body, bindings)});
    return messages;
}

// One reflection as the template engine sees it.
struct MemoryEntryView {
    int iteration = 0;
    std::string text;
};

struct ExpandedMemory {
    std::string text;
    bool truncated = false;
};

namespace detail {

inline std::string first_sentence(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '.' || text[i] == '!' || text[i] == '?')
            return trim(text.substr(0, i + 1));
        if (text[i] == '\n') return trim(text.substr(0, i));
    }
    return trim(text);
}

inline std::string join_memory_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

}  // namespace detail

// Renders the reflection history as numbered entries, oldest first.
// When the rendered block exceeds char_budget (0 = unlimited), the
// oldest entries are summarized to their first sentence, one at a
// time, until the block fits or everything is summarized. Entries are
// never dropped outright.
inline ExpandedMemory expand_memory(const std::vector<MemoryEntryView>& entries,
                                    std::size_t char_budget = 0) {
    if (entries.empty()) return {std::string(kNoMemoryPlaceholder), false};

    std::vector<std::string> lines;
    lines.reserve(entries.size());
    for (const auto& e : entries)
        lines.push_back("Reflection " + std::to_string(e.iteration) + ": " + e.text);

    ExpandedMemory out{detail::join_memory_lines(lines), false};
    if (char_budget == 0) return out;

    for (std::size_t k = 0; k < entries.size() && out.text.size() > char_budget; ++k) {
        lines[k] = "Reflection " + std::to_string(entries[k].iteration) + ": " +
                   detail::first_sentence(entries[k].text);
        out.truncated = true;
        out.text = detail::join_memory_lines(lines);
    }
    return out;
}

inline std::string expand_plan(const std::vector<std::string>& actions) {
    if (actions.empty()) return std::string(kNoPlanPlaceholder);
    std::string out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        if (i) out += '\n';
        out += "- " + actions[i];
    }
    return out;
}

}  // namespace ocrloop
