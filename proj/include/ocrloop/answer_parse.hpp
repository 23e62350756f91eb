#pragma once

#include <cctype>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ocrloop/metrics/extraction_f1.hpp"
#include "ocrloop/metrics/iou.hpp"
#include "ocrloop/text_norm.hpp"

// Free-text model answers are not typed metric operands. These helpers
// pull integers, key-value pairs, and boxes out of whatever the model
// wrote; the metrics themselves stay pure.
namespace ocrloop {

// All non-negative integers in order of appearance. Commas between
// digits are treated as thousand separators ("1,234" is one number).
inline std::vector<long long> extract_integers(std::string_view text) {
    std::vector<long long> out;
    std::string run;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            run += c;
        } else if (c == ',' && !run.empty() && i + 1 < text.size() &&
                   std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            continue;  // separator inside a number
        } else if (!run.empty()) {
            if (run.size() <= 18) out.push_back(std::stoll(run));
            run.clear();
        }
    }
    if (!run.empty() && run.size() <= 18) out.push_back(std::stoll(run));
    return out;
}

// Pads with zeros or truncates so the prediction lines up with the
// gold count vector.
inline std::vector<long long> align_counts(std::vector<long long> pred, std::size_t gold_size) {
    pred.resize(gold_size, 0);
    return pred;
}

namespace detail {

inline KeyValueSet key_values_from_json(const nlohmann::json& obj) {
    KeyValueSet out;
    for (const auto& [key, value] : obj.items()) {
        const std::string k = trim(key);
        if (k.empty()) continue;
        if (value.is_string()) {
            out[k].push_back(value.get<std::string>());
        } else if (value.is_array()) {
            for (const auto& v : value)
                out[k].push_back(v.is_string() ? v.get<std::string>() : v.dump());
        } else {
            out[k].push_back(value.dump());
        }
    }
    return out;
}

}  // namespace detail

// Key-value pairs from a model answer: a JSON object anywhere in the
// text (including inside a code fence) wins; otherwise "key: value"
// lines are collected.
inline KeyValueSet parse_key_values(std::string_view text) {
    const std::string s(text);
    const auto open = s.find('{');
    if (open != std::string::npos) {
        const auto close = s.rfind('}');
        if (close != std::string::npos && close > open) {
            nlohmann::json parsed =
                nlohmann::json::parse(s.substr(open, close - open + 1), nullptr, false);
            if (parsed.is_object()) return detail::key_values_from_json(parsed);
        }
    }

    KeyValueSet out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        if (key.empty() || value.empty()) continue;
        out[key].push_back(value);
    }
    return out;
}

// Every bracketed or parenthesized group of four numbers becomes a
// box. Inverted corners are swapped into well-formed order instead of
// being dropped.
inline std::vector<BoundingBox> parse_boxes(std::string_view text) {
    static const std::regex group(
        R"([\[\(]\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*[\]\)])");
    std::vector<BoundingBox> out;
    const std::string s(text);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), group);
         it != std::sregex_iterator(); ++it) {
        BoundingBox b{std::stod((*it)[1]), std::stod((*it)[2]), std::stod((*it)[3]),
                      std::stod((*it)[4])};
        if (b.x_min > b.x_max) std::swap(b.x_min, b.x_max);
        if (b.y_min > b.y_max) std::swap(b.y_min, b.y_max);
        out.push_back(b);
    }
    return out;
}

// Spotting answers pair a box with the text read at that box, one per
// line. The residual of the line after removing the box group (and any
// separator punctuation) is the text.
inline std::vector<std::pair<BoundingBox, std::string>> parse_spotting(std::string_view text) {
    static const std::regex group(
        R"([\[\(]\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*[\]\)])");
    std::vector<std::pair<BoundingBox, std::string>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::smatch m;
        if (!std::regex_search(line, m, group)) continue;
        BoundingBox b{std::stod(m[1]), std::stod(m[2]), std::stod(m[3]), std::stod(m[4])};
        if (b.x_min > b.x_max) std::swap(b.x_min, b.x_max);
        if (b.y_min > b.y_max) std::swap(b.y_min, b.y_max);
        std::string rest = trim(m.prefix().str() + " " + m.suffix().str());
        while (!rest.empty() && (rest.front() == ':' || rest.front() == '-' ||
                                 rest.front() == ',' || rest.front() == '>'))
            rest = trim(rest.substr(1));
        while (!rest.empty() && (rest.back() == ':' || rest.back() == '-' ||
                                 rest.back() == ',' || rest.back() == '>'))
            rest = trim(rest.substr(0, rest.size() - 1));
        out.emplace_back(b, rest);
    }
    return out;
}

}  // namespace ocrloop
