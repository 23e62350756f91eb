#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ocrloop/metrics/anls.hpp"
#include "ocrloop/metrics/score.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

namespace detail {

inline std::map<std::vector<std::string>, int> ngram_counts(const std::vector<std::string>& tokens,
                                                            std::size_t n) {
    std::map<std::vector<std::string>, int> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                        tokens.begin() + static_cast<long>(i + n))]++;
    }
    return counts;
}

}  // namespace detail

// BLEU with clipped n-gram precisions for n = 1..max_n, add-one
// smoothing when a precision's match count is zero, and brevity
// penalty min(1, exp(1 - |ref|/|pred|)).
inline MetricScore bleu(std::string_view pred, std::string_view ref, int max_n = 4) {
    MetricScore score;
    score.metric = "bleu";
    const auto p = tokenize_words(pred);
    const auto r = tokenize_words(ref);
    if (p.empty()) {
        score.diagnostics["note"] = "empty prediction";
        return score;
    }
    double log_sum = 0.0;
    nlohmann::json precisions = nlohmann::json::array();
    for (int n = 1; n <= max_n; ++n) {
        const auto pc = detail::ngram_counts(p, static_cast<std::size_t>(n));
        const auto rc = detail::ngram_counts(r, static_cast<std::size_t>(n));
        long total = 0, matched = 0;
        for (const auto& [gram, cnt] : pc) {
            total += cnt;
            const auto it = rc.find(gram);
            if (it != rc.end()) matched += std::min(cnt, it->second);
        }
        double prec;
        if (matched == 0) {
            prec = 1.0 / static_cast<double>(total + 1);  // add-one smoothing
        } else {
            prec = static_cast<double>(matched) / static_cast<double>(total);
        }
        precisions.push_back(prec);
        log_sum += std::log(prec);
    }
    const double geo_mean = std::exp(log_sum / static_cast<double>(max_n));
    const double bp = std::min(1.0, std::exp(1.0 - static_cast<double>(r.size()) /
                                                       static_cast<double>(p.size())));
    score.value = clamp01(geo_mean * bp);
    score.diagnostics["precisions"] = precisions;
    score.diagnostics["brevity_penalty"] = bp;
    return score;
}

// Exact-unigram METEOR variant: greedy one-to-one alignment, harmonic
// mean weighted toward recall, cubic fragmentation penalty. No
// stemming or synonym tables; reports always name it meteor_lite.
inline MetricScore meteor_lite(std::string_view pred, std::string_view ref) {
    MetricScore score;
    score.metric = "meteor_lite";
    const auto p = tokenize_words(pred);
    const auto r = tokenize_words(ref);
    if (p.empty() || r.empty()) return score;

    // greedy left-to-right one-to-one alignment: pred position -> ref position
    std::vector<long> align(p.size(), -1);
    std::vector<bool> used(r.size(), false);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!used[j] && p[i] == r[j]) {
                align[i] = static_cast<long>(j);
                used[j] = true;
                ++matched;
                break;
            }
        }
    }
    if (matched == 0) return score;

    // chunks: maximal runs of matches adjacent in both strings
    std::size_t chunks = 0;
    long prev_ref = -2;
    bool in_chunk = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (align[i] < 0) { in_chunk = false; prev_ref = -2; continue; }
        if (!in_chunk || align[i] != prev_ref + 1) ++chunks;
        in_chunk = true;
        prev_ref = align[i];
    }

    const double m = static_cast<double>(matched);
    const double precision = m / static_cast<double>(p.size());
    const double recall = m / static_cast<double>(r.size());
    const double f_mean = 10.0 * precision * recall / (recall + 9.0 * precision);
    const double frag = static_cast<double>(chunks) / m;
    const double penalty = 0.5 * frag * frag * frag;
    score.value = clamp01(f_mean * (1.0 - penalty));
    score.diagnostics["matched"] = matched;
    score.diagnostics["chunks"] = chunks;
    score.diagnostics["precision"] = precision;
    score.diagnostics["recall"] = recall;
    return score;
}

// Bag-of-tokens F1.
inline MetricScore token_f1(std::string_view pred, std::string_view ref) {
    MetricScore score;
    score.metric = "token_f1";
    const auto p = tokenize_words(pred);
    const auto r = tokenize_words(ref);
    if (p.empty() || r.empty()) return score;
    std::map<std::string, int> pc, rc;
    for (const auto& t : p) pc[t]++;
    for (const auto& t : r) rc[t]++;
    long tp = 0;
    for (const auto& [t, c] : pc) {
        const auto it = rc.find(t);
        if (it != rc.end()) tp += std::min(c, it->second);
    }
    if (tp == 0) return score;
    const double precision = static_cast<double>(tp) / static_cast<double>(p.size());
    const double recall = static_cast<double>(tp) / static_cast<double>(r.size());
    score.value = clamp01(2.0 * precision * recall / (precision + recall));
    score.diagnostics["precision"] = precision;
    score.diagnostics["recall"] = recall;
    return score;
}

// Long-document reading: unweighted mean of BLEU, meteor_lite,
// token-level F1 and normalized edit similarity. Empty predictions
// score 0 across the board.
inline MetricScore long_reading_score(std::string_view pred, std::string_view gold) {
    MetricScore score;
    score.metric = "long_reading";
    const std::string np = normalize_text(pred);
    if (np.empty()) {
        score.diagnostics["note"] = "empty prediction";
        return score;
    }
    const MetricScore b = bleu(pred, gold);
    const MetricScore m = meteor_lite(pred, gold);
    const MetricScore f = token_f1(pred, gold);
    const double edit_sim = normalized_lev_similarity(np, normalize_text(gold));
    score.value = clamp01((b.value + m.value + f.value + edit_sim) / 4.0);
    score.diagnostics["bleu"] = b.value;
    score.diagnostics["meteor_lite"] = m.value;
    score.diagnostics["token_f1"] = f.value;
    score.diagnostics["edit_similarity"] = edit_sim;
    return score;
}

}  // namespace ocrloop
