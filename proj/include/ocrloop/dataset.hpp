#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocrloop/errors.hpp"
#include "ocrloop/metrics/extraction_f1.hpp"
#include "ocrloop/metrics/iou.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

enum class TaskType {
    Recognition,
    Referring,
    Spotting,
    Extraction,
    Parsing,
    Calculation,
    Understanding,
    Reasoning,
    Counting,
    LongReading,
};

inline std::string to_string(TaskType t) {
    switch (t) {
        case TaskType::Recognition: return "recognition";
        case TaskType::Referring: return "referring";
        case TaskType::Spotting: return "spotting";
        case TaskType::Extraction: return "extraction";
        case TaskType::Parsing: return "parsing";
        case TaskType::Calculation: return "calculation";
        case TaskType::Understanding: return "understanding";
        case TaskType::Reasoning: return "reasoning";
        case TaskType::Counting: return "counting";
        default: return "long_reading";
    }
}

inline std::optional<TaskType> parse_task_type(std::string_view s) {
    if (s == "recognition") return TaskType::Recognition;
    if (s == "referring") return TaskType::Referring;
    if (s == "spotting") return TaskType::Spotting;
    if (s == "extraction") return TaskType::Extraction;
    if (s == "parsing") return TaskType::Parsing;
    if (s == "calculation") return TaskType::Calculation;
    if (s == "understanding") return TaskType::Understanding;
    if (s == "reasoning") return TaskType::Reasoning;
    if (s == "counting") return TaskType::Counting;
    if (s == "long_reading") return TaskType::LongReading;
    return std::nullopt;
}

// Report column order: the eight benchmark-table columns first, then
// the two auxiliary tasks.
inline const std::array<TaskType, 10>& task_column_order() {
    static const std::array<TaskType, 10> order = {
        TaskType::Recognition,   TaskType::Referring, TaskType::Spotting,
        TaskType::Extraction,    TaskType::Parsing,   TaskType::Calculation,
        TaskType::Understanding, TaskType::Reasoning, TaskType::Counting,
        TaskType::LongReading,
    };
    return order;
}

// Ground truth, one variant populated according to the task type.
struct GoldData {
    std::vector<std::string> answers;    // text tasks
    KeyValueSet fields;                  // extraction
    std::vector<BoundingBox> boxes;      // referring + spotting
    std::vector<std::string> box_texts;  // spotting, parallel to boxes
    std::string table_markup;            // parsing
    std::vector<long long> counts;       // counting
};

struct Sample {
    std::string id;
    std::string image_ref;
    std::string question;
    TaskType task_type = TaskType::Recognition;
    std::string language = "en";
    GoldData gold;
    std::string eval_directive;  // optional metric override for vqa routing
};

struct LoadDiagnostic {
    int line = 0;
    std::string message;
};

struct LoadReport {
    std::vector<Sample> samples;
    std::vector<LoadDiagnostic> diagnostics;
};

namespace detail {

inline std::string dirname_of(const std::string& path) {
    const auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& key) {
    std::vector<std::string> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_string()) throw DatasetFormatError("'" + key + "' entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline GoldData parse_gold(const nlohmann::json& g) {
    GoldData gold;
    if (g.contains("answers")) gold.answers = string_list(g, "answers");
    if (g.contains("fields")) {
        for (const auto& [key, value] : g.at("fields").items()) {
            if (value.is_string()) {
                gold.fields[key].push_back(value.get<std::string>());
            } else if (value.is_array()) {
                for (const auto& v : value) gold.fields[key].push_back(v.get<std::string>());
            } else {
                throw DatasetFormatError("field '" + key + "' must be a string or string list");
            }
        }
    }
    if (g.contains("boxes")) {
        for (const auto& b : g.at("boxes")) {
            if (!b.is_array() || b.size() != 4)
                throw DatasetFormatError("each box must be [x_min, y_min, x_max, y_max]");
            gold.boxes.push_back(BoundingBox{b[0].get<double>(), b[1].get<double>(),
                                             b[2].get<double>(), b[3].get<double>()});
        }
    }
    if (g.contains("box_texts")) gold.box_texts = string_list(g, "box_texts");
    if (g.contains("table")) gold.table_markup = g.at("table").get<std::string>();
    if (g.contains("counts")) {
        for (const auto& c : g.at("counts")) {
            if (!c.is_number_integer())
                throw DatasetFormatError("'counts' entries must be integers");
            gold.counts.push_back(c.get<long long>());
        }
    }
    return gold;
}

inline void check_gold_matches_task(const Sample& s) {
    const auto need = [&](bool ok, const std::string& what) {
        if (!ok)
            throw DatasetFormatError("task '" + to_string(s.task_type) + "' requires gold " + what);
    };
    switch (s.task_type) {
        case TaskType::Extraction: need(!s.gold.fields.empty(), "'fields'"); break;
        case TaskType::Referring: need(!s.gold.boxes.empty(), "'boxes'"); break;
        case TaskType::Spotting:
            need(!s.gold.boxes.empty(), "'boxes'");
            need(s.gold.box_texts.size() == s.gold.boxes.size(),
                 "'box_texts' parallel to 'boxes'");
            break;
        case TaskType::Parsing: need(!s.gold.table_markup.empty(), "'table'"); break;
        case TaskType::Counting: need(!s.gold.counts.empty(), "'counts'"); break;
        default: need(!s.gold.answers.empty(), "'answers'"); break;
    }
}

inline Sample parse_sample_line(const std::string& line, const std::string& base_dir) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DatasetFormatError("invalid JSON");
    if (!j.is_object()) throw DatasetFormatError("line is not an object");

    for (const char* key : {"id", "image", "question", "task_type", "gold"})
        if (!j.contains(key)) throw DatasetFormatError(std::string("missing '") + key + "'");

    Sample s;
    s.id = j.at("id").get<std::string>();
    if (s.id.empty()) throw DatasetFormatError("empty 'id'");
    s.image_ref = j.at("image").get<std::string>();
    if (!s.image_ref.empty() && s.image_ref[0] != '/' &&
        s.image_ref.find("://") == std::string::npos)
        s.image_ref = base_dir + "/" + s.image_ref;
    s.question = j.at("question").get<std::string>();

    const auto task = parse_task_type(j.at("task_type").get<std::string>());
    if (!task)
        throw DatasetFormatError("unknown task_type '" +
                                 j.at("task_type").get<std::string>() + "'");
    s.task_type = *task;

    if (j.contains("language")) {
        s.language = j.at("language").get<std::string>();
        if (s.language != "en" && s.language != "zh")
            throw DatasetFormatError("language must be 'en' or 'zh'");
    }
    if (j.contains("eval")) s.eval_directive = j.at("eval").get<std::string>();

    s.gold = parse_gold(j.at("gold"));
    check_gold_matches_task(s);
    return s;
}

}  // namespace detail

// Line-delimited JSON, one sample per line. In strict mode the first
// bad line aborts the load; otherwise bad lines become diagnostics and
// the rest of the file still loads. Relative image paths resolve
// against the dataset file's directory.
inline LoadReport load_dataset(const std::string& path, bool strict = false) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw DatasetFormatError("cannot read dataset file: " + path);

    const std::string base_dir = detail::dirname_of(path);
    LoadReport report;
    std::set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            Sample s = detail::parse_sample_line(line, base_dir);
            if (!seen_ids.insert(s.id).second)
                throw DatasetFormatError("duplicate id '" + s.id + "'");
            report.samples.push_back(std::move(s));
        } catch (const DatasetFormatError& e) {
            if (strict)
                throw DatasetFormatError("line " + std::to_string(line_no) + ": " + e.what());
            report.diagnostics.push_back({line_no, e.what()});
        } catch (const nlohmann::json::exception& e) {
            if (strict)
                throw DatasetFormatError("line " + std::to_string(line_no) + ": " + e.what());
            report.diagnostics.push_back({line_no, e.what()});
        }
    }
    return report;
}

// Identity of the dataset content, recorded in run results so that
// comparisons can refuse to diff runs over different data.
inline std::string dataset_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw DatasetFormatError("cannot read dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return hex64(fnv1a(buf.str()));
}

}  // namespace ocrloop
