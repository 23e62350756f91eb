#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/errors.hpp"
#include "ocrloop/metrics/levenshtein.hpp"
#include "ocrloop/metrics/score.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

// Similarity of two already-normalized strings: 1 - lev/maxlen, with
// the length measured in code points. Two empty strings are identical.
inline double normalized_lev_similarity(std::string_view norm_a, std::string_view norm_b) {
    const auto a = utf8_decode(norm_a);
    const auto b = utf8_decode(norm_b);
    const std::size_t maxlen = std::max(a.size(), b.size());
    if (maxlen == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein_seq(a, b)) / static_cast<double>(maxlen);
}

// Average Normalized Levenshtein Similarity. Per gold answer the
// similarity is thresholded at tau (below tau scores 0), then the best
// gold wins.
inline MetricScore anls(std::string_view pred,
                        const std::vector<std::string>& gold_set,
                        double tau = 0.5) {
    if (gold_set.empty()) throw EmptyGoldError("anls: empty gold set");
    const std::string np = normalize_text(pred);
    MetricScore score;
    score.metric = "anls";
    double best = 0.0;
    double best_raw = 0.0;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < gold_set.size(); ++i) {
        const std::string ng = normalize_text(gold_set[i]);
        const double sim = normalized_lev_similarity(np, ng);
        const double thresholded = sim >= tau ? sim : 0.0;
        if (thresholded > best || (i == 0 && thresholded == best)) {
            best = thresholded;
            best_raw = sim;
            best_index = i;
        }
    }
    score.value = clamp01(best);
    score.diagnostics["tau"] = tau;
    score.diagnostics["best_gold_index"] = best_index;
    score.diagnostics["best_similarity_raw"] = best_raw;
    return score;
}

}  // namespace ocrloop
