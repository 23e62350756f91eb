#pragma once

#include <algorithm>
#include <string>
#include <string_view>

#include "ocrloop/answer_parse.hpp"
#include "ocrloop/dataset.hpp"
#include "ocrloop/metrics.hpp"

namespace ocrloop {

namespace detail {

inline KeyValueSet normalize_keys(const KeyValueSet& kv) {
    KeyValueSet out;
    for (const auto& [key, values] : kv) {
        const std::string nk = normalize_text(key);
        for (const auto& v : values) out[nk].push_back(v);
    }
    return out;
}

inline MetricScore score_referring(const Sample& sample, std::string_view answer) {
    const auto pred_boxes = parse_boxes(answer);
    MetricScore score;
    score.metric = "referring_iou";
    score.diagnostics["pred_boxes"] = pred_boxes.size();
    if (pred_boxes.empty()) {
        score.diagnostics["note"] = "no boxes parsed from answer";
        return score;
    }
    // each gold box is credited with its best-overlapping prediction
    double total = 0.0;
    for (const auto& g : sample.gold.boxes) {
        double best = 0.0;
        for (const auto& p : pred_boxes) best = std::max(best, iou_value(p, g));
        total += best;
    }
    score.value = clamp01(total / static_cast<double>(sample.gold.boxes.size()));
    return score;
}

inline MetricScore score_spotting(const Sample& sample, std::string_view answer) {
    const auto pred = parse_spotting(answer);
    MetricScore score;
    score.metric = "spotting";
    score.diagnostics["pred_pairs"] = pred.size();
    if (pred.empty()) {
        score.diagnostics["note"] = "no box/text pairs parsed from answer";
        return score;
    }
    // a gold instance counts when some prediction overlaps it at
    // IoU >= 0.5 and reads the same text
    int hits = 0;
    for (std::size_t i = 0; i < sample.gold.boxes.size(); ++i) {
        const std::string gold_text = normalize_text(sample.gold.box_texts[i]);
        for (const auto& [box, text] : pred) {
            if (iou_value(box, sample.gold.boxes[i]) >= 0.5 &&
                normalize_text(text) == gold_text) {
                ++hits;
                break;
            }
        }
    }
    score.value = static_cast<double>(hits) / static_cast<double>(sample.gold.boxes.size());
    score.diagnostics["hits"] = hits;
    return score;
}

inline MetricScore score_counting(const Sample& sample, std::string_view answer) {
    const auto integers = extract_integers(answer);
    MetricScore score =
        counting_score(align_counts(integers, sample.gold.counts.size()), sample.gold.counts);
    if (integers.empty()) score.diagnostics["note"] = "no integers parsed from answer";
    score.diagnostics["parsed_integers"] = integers.size();
    return score;
}

inline MetricScore score_long_reading(const Sample& sample, std::string_view answer) {
    MetricScore best;
    best.metric = "long_reading";
    for (const auto& gold : sample.gold.answers) {
        MetricScore s = long_reading_score(answer, gold);
        if (s.value >= best.value) best = std::move(s);
    }
    return best;
}

}  // namespace detail

// Routes an answer to the metric its task calls for. Never throws:
// unparseable answers score zero with a diagnostic note, because a bad
// answer is a model failure, not a harness failure.
inline MetricScore score_answer(const Sample& sample, std::string_view answer,
                                double tau = 0.5) {
    try {
        switch (sample.task_type) {
            case TaskType::Parsing:
                return teds(parse_table_markup(answer), parse_table_markup(sample.gold.table_markup));
            case TaskType::Extraction:
                return extraction_f1(detail::normalize_keys(parse_key_values(answer)),
                                     detail::normalize_keys(sample.gold.fields));
            case TaskType::Referring:
                return detail::score_referring(sample, answer);
            case TaskType::Spotting:
                return detail::score_spotting(sample, answer);
            case TaskType::Counting:
                return detail::score_counting(sample, answer);
            case TaskType::LongReading:
                return detail::score_long_reading(sample, answer);
            default:
                return vqa_score(answer, sample.gold.answers,
                                 parse_vqa_method(sample.eval_directive), tau);
        }
    } catch (const std::exception& e) {
        MetricScore score;
        score.metric = "error";
        score.diagnostics["error"] = e.what();
        return score;
    }
}

}  // namespace ocrloop
