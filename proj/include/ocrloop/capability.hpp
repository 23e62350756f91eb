#pragma once

#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/errors.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

enum class Verdict { Feasible, Infeasible, Unclassified };

enum class ActionCategory {
    TextOperation,
    ImageManipulation,
    HumanInLoop,
    ExternalTool,
    Unknown,
};

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Feasible: return "feasible";
        case Verdict::Infeasible: return "infeasible";
        default: return "unclassified";
    }
}

inline std::string to_string(ActionCategory c) {
    switch (c) {
        case ActionCategory::TextOperation: return "text_operation";
        case ActionCategory::ImageManipulation: return "image_manipulation";
        case ActionCategory::HumanInLoop: return "human_in_loop";
        case ActionCategory::ExternalTool: return "external_tool";
        default: return "unknown";
    }
}

inline std::optional<Verdict> parse_verdict(std::string_view s) {
    if (s == "feasible") return Verdict::Feasible;
    if (s == "infeasible") return Verdict::Infeasible;
    if (s == "unclassified") return Verdict::Unclassified;
    return std::nullopt;
}

inline std::optional<ActionCategory> parse_category(std::string_view s) {
    if (s == "text_operation") return ActionCategory::TextOperation;
    if (s == "image_manipulation") return ActionCategory::ImageManipulation;
    if (s == "human_in_loop") return ActionCategory::HumanInLoop;
    if (s == "external_tool") return ActionCategory::ExternalTool;
    if (s == "unknown") return ActionCategory::Unknown;
    return std::nullopt;
}

// One corrective action proposed in a reflection. Starts out
// Unclassified; classify_action fills in the verdict and category.
struct PlanAction {
    std::string text;
    Verdict verdict = Verdict::Unclassified;
    ActionCategory category = ActionCategory::Unknown;
    std::optional<std::string> matched_rule;
};

// verdict/category pairings the rest of the code may rely on
inline bool verdict_category_consistent(Verdict v, ActionCategory c) {
    if (v == Verdict::Infeasible)
        return c == ActionCategory::ImageManipulation || c == ActionCategory::HumanInLoop ||
               c == ActionCategory::ExternalTool;
    if (v == Verdict::Feasible)
        return c == ActionCategory::TextOperation || c == ActionCategory::Unknown;
    return true;
}

struct TaxonomyRule {
    std::string pattern_source;
    std::regex pattern;  // case-insensitive, matched anywhere in the action text
    ActionCategory category = ActionCategory::Unknown;
    Verdict verdict = Verdict::Feasible;
};

// Ordered rule list; the first matching rule decides. Actions no rule
// matches fall through to default_verdict (Feasible, category unknown).
struct Taxonomy {
    std::vector<TaxonomyRule> rules;
    Verdict default_verdict = Verdict::Feasible;
};

inline PlanAction classify_action(PlanAction action, const Taxonomy& taxonomy) {
    for (const auto& rule : taxonomy.rules) {
        if (std::regex_search(action.text, rule.pattern)) {
            action.verdict = rule.verdict;
            action.category = rule.category;
            action.matched_rule = rule.pattern_source;
            return action;
        }
    }
    action.verdict = taxonomy.default_verdict;
    action.category = ActionCategory::Unknown;
    action.matched_rule = std::nullopt;
    return action;
}

struct FilterResult {
    std::vector<PlanAction> feasible;
    std::vector<PlanAction> rejected;
};

// Splits a plan into executable and rejected actions, preserving input
// order. Exact duplicate texts on the feasible side collapse to the
// first occurrence; rejected actions keep their multiplicity.
inline FilterResult filter_plan(const std::vector<PlanAction>& plan, const Taxonomy& taxonomy) {
    FilterResult out;
    for (const auto& raw : plan) {
        PlanAction a = classify_action(raw, taxonomy);
        if (a.verdict == Verdict::Infeasible) {
            out.rejected.push_back(std::move(a));
            continue;
        }
        bool seen = false;
        for (const auto& kept : out.feasible)
            if (kept.text == a.text) { seen = true; break; }
        if (!seen) out.feasible.push_back(std::move(a));
    }
    return out;
}

// Rule document format, one rule per line:
//   verdict  category  pattern...
// '#' starts a comment; the pattern is the rest of the line and is
// compiled as a case-insensitive regex.
inline Taxonomy load_taxonomy(std::string_view source) {
    Taxonomy tax;
    std::istringstream in{std::string(source)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;

        std::istringstream fields(body);
        std::string verdict_tok, category_tok;
        fields >> verdict_tok >> category_tok;
        std::string pattern;
        std::getline(fields, pattern);
        pattern = trim(pattern);

        const auto verdict = parse_verdict(verdict_tok);
        if (!verdict || *verdict == Verdict::Unclassified)
            throw TaxonomyParseError("unknown verdict '" + verdict_tok + "'", line_no);
        const auto category = parse_category(category_tok);
        if (!category)
            throw TaxonomyParseError("unknown category '" + category_tok + "'", line_no);
        if (pattern.empty()) throw TaxonomyParseError("missing pattern", line_no);
        if (!verdict_category_consistent(*verdict, *category))
            throw TaxonomyParseError("verdict '" + verdict_tok + "' cannot pair with category '" +
                                         category_tok + "'",
                                     line_no);

        TaxonomyRule rule;
        rule.pattern_source = pattern;
        rule.category = *category;
        rule.verdict = *verdict;
        try {
            rule.pattern = std::regex(pattern, std::regex::icase | std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw TaxonomyParseError(std::string("invalid pattern: ") + e.what(), line_no);
        }
        tax.rules.push_back(std::move(rule));
    }
    return tax;
}

// Shipped rule set. Infeasible rules come first so that phrases like
// "verify manually" resolve to the capability gap rather than the
// generic verify rule below them.
inline const std::string& default_taxonomy_source() {
    static const std::string source = R"(# Capability taxonomy: verdict  category  pattern
# First match wins. Unmatched actions default to feasible/unknown.

# actions that would require editing or re-imaging the input
infeasible  image_manipulation  enhanc
infeasible  image_manipulation  denois
infeasible  image_manipulation  upscal
infeasible  image_manipulation  super.?resolution
infeasible  image_manipulation  binariz
infeasible  image_manipulation  crop
infeasible  image_manipulation  rotat
infeasible  image_manipulation  deskew
infeasible  image_manipulation  sharpen
infeasible  image_manipulation  deblur
infeasible  image_manipulation  grayscale|greyscale
infeasible  image_manipulation  (increase|improve|adjust|boost).{0,20}(resolution|contrast|brightness)
infeasible  image_manipulation  re.?scan|retak(e|ing).{0,12}(photo|image|picture)

# actions that delegate to a person
infeasible  human_in_loop  proofread
infeasible  human_in_loop  human
infeasible  human_in_loop  ask (the |a )?(user|person|someone|author)
infeasible  human_in_loop  consult
infeasible  human_in_loop  manual
infeasible  human_in_loop  expert|annotator

# actions that reach outside the model
infeasible  external_tool  ocr (engine|tool|software|system)
infeasible  external_tool  run (an? )?ocr|tesseract
infeasible  external_tool  search the (web|internet)|web search|google|online search
infeasible  external_tool  look.{0,8}up online
infeasible  external_tool  (call|use|query) (an? )?api|api call
infeasible  external_tool  external (tool|software|service|program|database)
infeasible  external_tool  spell.?checker
infeasible  external_tool  (run|execute|write).{0,12}(script|program|code)

# text-side work the model can do on its own
feasible  text_operation  re.?read|read.{0,24}again
feasible  text_operation  re.?examin|re.?check|double.?check|re.?inspect
feasible  text_operation  re.?assess|re.?analy[sz]e|re.?consider|re.?evaluat
feasible  text_operation  verify|cross.?check|compare
feasible  text_operation  transcrib|spell out
feasible  text_operation  character.by.character|letter.by.letter|digit.by.digit
feasible  text_operation  focus|attend|attention|zoom
feasible  text_operation  correct|fix|revis|rewrit|reformat|restructur
feasible  text_operation  recount|count.{0,16}again
feasible  text_operation  check.{0,24}(format|spelling|punctuation|alignment|order)
)";
    return source;
}

inline const Taxonomy& default_taxonomy() {
    static const Taxonomy tax = load_taxonomy(default_taxonomy_source());
    return tax;
}

}  // namespace ocrloop
