#pragma once

#include <cstdlib>
#include <vector>

#include "ocrloop/errors.hpp"
#include "ocrloop/metrics/score.hpp"

namespace ocrloop {

// Normalized L1 distance over aligned count vectors: per element
// max(0, 1 - |pred - gold| / max(gold, 1)), averaged. The max(gold, 1)
// denominator guards gold counts of zero.
inline MetricScore counting_score(const std::vector<long long>& pred,
                                  const std::vector<long long>& gold) {
    if (gold.empty()) throw EmptyGoldError("counting_score: empty gold counts");
    if (pred.size() != gold.size())
        throw LengthMismatchError("counting_score: pred has " + std::to_string(pred.size()) +
                                  " counts, gold has " + std::to_string(gold.size()));
    MetricScore score;
    score.metric = "counting";
    double sum = 0.0;
    nlohmann::json per_element = nlohmann::json::array();
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const double denom = static_cast<double>(std::max<long long>(gold[i], 1));
        const double diff = static_cast<double>(std::llabs(pred[i] - gold[i]));
        const double s = std::max(0.0, 1.0 - diff / denom);
        per_element.push_back(s);
        sum += s;
    }
    score.value = clamp01(sum / static_cast<double>(gold.size()));
    score.diagnostics["per_element"] = per_element;
    return score;
}

}  // namespace ocrloop
