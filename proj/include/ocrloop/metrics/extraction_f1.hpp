#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ocrloop/metrics/score.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

// Field name -> extracted values. std::map keeps serialization stable.
using KeyValueSet = std::map<std::string, std::vector<std::string>>;

// F1 over (field, value) pairs. A pair is a true positive when the
// field names match exactly and the values match after normalization;
// repeated values match multiset-style within a field.
inline MetricScore extraction_f1(const KeyValueSet& pred, const KeyValueSet& gold) {
    MetricScore score;
    score.metric = "extraction_f1";

    std::size_t pred_pairs = 0, gold_pairs = 0, tp = 0;
    for (const auto& [k, vs] : pred) pred_pairs += vs.size();
    for (const auto& [k, vs] : gold) gold_pairs += vs.size();

    for (const auto& [field, gold_values] : gold) {
        const auto it = pred.find(field);
        if (it == pred.end()) continue;
        std::multiset<std::string> pool;
        for (const auto& v : it->second) pool.insert(normalize_text(v));
        for (const auto& gv : gold_values) {
            const auto hit = pool.find(normalize_text(gv));
            if (hit != pool.end()) {
                pool.erase(hit);
                ++tp;
            }
        }
    }

    const double precision = pred_pairs == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_pairs);
    const double recall = gold_pairs == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_pairs);
    if (pred_pairs == 0 && gold_pairs == 0) {
        score.value = 1.0;  // nothing required, nothing asserted
    } else if (tp == 0) {
        score.value = 0.0;
    } else {
        score.value = clamp01(2.0 * precision * recall / (precision + recall));
    }
    score.diagnostics["precision"] = precision;
    score.diagnostics["recall"] = recall;
    score.diagnostics["true_positives"] = tp;
    score.diagnostics["pred_pairs"] = pred_pairs;
    score.diagnostics["gold_pairs"] = gold_pairs;
    return score;
}

}  // namespace ocrloop
