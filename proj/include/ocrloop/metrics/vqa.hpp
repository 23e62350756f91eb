#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/errors.hpp"
#include "ocrloop/metrics/anls.hpp"
#include "ocrloop/metrics/score.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

// How a VQA-style answer should be compared against gold. `Auto` routes
// by answer length; the dataset's per-sample eval directive overrides.
enum class VqaMethod { Auto, Exact, Contains, ContainsEither, Anls };

inline VqaMethod parse_vqa_method(std::string_view directive) {
    const std::string d = to_lower_ascii(trim(directive));
    if (d.empty() || d == "auto") return VqaMethod::Auto;
    if (d == "exact") return VqaMethod::Exact;
    if (d == "contains") return VqaMethod::Contains;
    if (d == "contains-either" || d == "contains_either") return VqaMethod::ContainsEither;
    if (d == "anls") return VqaMethod::Anls;
    return VqaMethod::Auto;
}

inline const char* vqa_method_name(VqaMethod m) {
    switch (m) {
        case VqaMethod::Exact: return "exact";
        case VqaMethod::Contains: return "contains";
        case VqaMethod::ContainsEither: return "contains-either";
        case VqaMethod::Anls: return "anls";
        default: return "auto";
    }
}

// Basic VQA scoring: exact match, containment, or ANLS, chosen by the
// sample's directive when it names one, otherwise by gold length
// (short answers are matched exactly, longer ones via ANLS).
inline MetricScore vqa_score(std::string_view pred,
                             const std::vector<std::string>& gold_set,
                             VqaMethod method = VqaMethod::Auto,
                             double tau = 0.5) {
    if (gold_set.empty()) throw EmptyGoldError("vqa_score: empty gold set");

    VqaMethod routed = method;
    if (routed == VqaMethod::Auto) {
        std::size_t max_tokens = 0;
        for (const auto& g : gold_set)
            max_tokens = std::max(max_tokens, tokenize_words(g).size());
        routed = max_tokens <= 3 ? VqaMethod::Exact : VqaMethod::Anls;
    }

    if (routed == VqaMethod::Anls) {
        MetricScore s = anls(pred, gold_set, tau);
        s.metric = "vqa";
        s.diagnostics["method"] = "anls";
        return s;
    }

    const std::string np = normalize_text(pred);
    MetricScore score;
    score.metric = "vqa";
    score.diagnostics["method"] = vqa_method_name(routed);
    for (const auto& g : gold_set) {
        const std::string ng = normalize_text(g);
        bool hit = false;
        switch (routed) {
            case VqaMethod::Exact:
                hit = np == ng;
                break;
            case VqaMethod::Contains:
                hit = !ng.empty() && np.find(ng) != std::string::npos;
                break;
            case VqaMethod::ContainsEither:
                hit = (!ng.empty() && np.find(ng) != std::string::npos) ||
                      (!np.empty() && ng.find(np) != std::string::npos);
                break;
            default:
                break;
        }
        if (hit) {
            score.value = 1.0;
            break;
        }
    }
    return score;
}

}  // namespace ocrloop
