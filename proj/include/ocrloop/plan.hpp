#pragma once

#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/capability.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

namespace detail {

inline bool is_plan_heading(const std::string& line) {
    static const std::regex heading(R"((plan|steps?|actions?|corrections?)\s*:?\s*$)",
                                    std::regex::icase);
    return std::regex_search(line, heading);
}

}  // namespace detail

// Pulls proposed actions out of a free-form reflection. Three marker
// styles are recognized, in order of appearance:
//   STEP: <action>            anywhere in the text (case-insensitive)
//   1. <action> / 2) <action> anywhere in the text
//   - <action>                only after a plan-like heading, so that
//                             ordinary bulleted prose is not swallowed
// Duplicates are kept; collapsing them is the filter's job. All actions
// come back Unclassified.
inline std::vector<PlanAction> extract_plan(std::string_view reflection_text) {
    static const std::regex step_marker(R"(^\s*step\s*:\s*(.*\S)\s*$)", std::regex::icase);
    static const std::regex numbered(R"(^\s*\d{1,3}[.)]\s+(.*\S)\s*$)");
    static const std::regex dash_bullet(R"(^\s*[-*]\s+(.*\S)\s*$)");

    std::vector<PlanAction> plan;
    std::istringstream in{std::string(reflection_text)};
    std::string line;
    bool in_plan_section = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::smatch m;
        if (std::regex_match(line, m, step_marker) || std::regex_match(line, m, numbered)) {
            plan.push_back(PlanAction{trim(m[1].str())});
            continue;
        }
        if (in_plan_section && std::regex_match(line, m, dash_bullet)) {
            plan.push_back(PlanAction{trim(m[1].str())});
            continue;
        }
        if (detail::is_plan_heading(line)) {
            in_plan_section = true;
        } else if (!trim(line).empty()) {
            // any other prose line closes a dash-bullet section
            in_plan_section = false;
        }
    }
    return plan;
}

}  // namespace ocrloop
