#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ocrloop/agent.hpp"
#include "ocrloop/dataset.hpp"
#include "ocrloop/errors.hpp"
#include "ocrloop/scoring.hpp"
#include "ocrloop/trace.hpp"

namespace ocrloop {

// One sample's outcome: the episode it ran plus a score for every
// intermediate answer A_0..A_T. Failed samples keep their partial
// episode and an error message instead of scores.
struct SampleRecord {
    std::string sample_id;
    TaskType task = TaskType::Recognition;
    bool failed = false;
    std::string error;
    EpisodeState episode;
    std::vector<MetricScore> iteration_scores;
};

struct AggregateTable {
    std::vector<std::pair<TaskType, double>> per_task;  // mean x100, column order
    double average = 0.0;                               // unweighted mean over columns
    std::size_t scored_samples = 0;
    std::size_t failed_samples = 0;
};

struct RunResult {
    std::string run_id;
    AgentMode mode = AgentMode::Full;
    int max_iterations = 0;
    double tau = 0.5;
    std::string config_hash;
    std::string template_hash;
    std::string dataset_hash;
    std::vector<SampleRecord> records;  // dataset order
    std::size_t failed_count = 0;
    bool interrupted = false;
    long long wall_ms = 0;
};

struct HarnessOptions {
    std::string out_dir;
    int workers = 1;
    double tau = 0.5;
    bool resume = false;
    // extra fields merged into the persisted config snapshot (the CLI
    // records its backend selection here)
    nlohmann::json extra_config = nlohmann::json::object();
    // test hook: return true to stop claiming new samples once the
    // given number of samples has completed
    std::function<bool(std::size_t completed)> stop_after;
};

namespace detail {

inline nlohmann::json metric_score_to_json(const MetricScore& s) {
    return nlohmann::json{{"value", s.value}, {"metric", s.metric}, {"diagnostics", s.diagnostics}};
}

inline MetricScore metric_score_from_json(const nlohmann::json& j) {
    MetricScore s;
    s.value = j.at("value").get<double>();
    s.metric = j.at("metric").get<std::string>();
    s.diagnostics = j.at("diagnostics");
    return s;
}

inline nlohmann::json record_to_json(const SampleRecord& r) {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& s : r.iteration_scores) scores.push_back(metric_score_to_json(s));
    return nlohmann::json{{"sample_id", r.sample_id}, {"task", to_string(r.task)},
                          {"failed", r.failed},       {"error", r.error},
                          {"episode", episode_to_json(r.episode)}, {"scores", std::move(scores)}};
}

inline SampleRecord record_from_json(const nlohmann::json& j) {
    SampleRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    const auto task = parse_task_type(j.at("task").get<std::string>());
    if (!task) throw Error("checkpoint record has unknown task");
    r.task = *task;
    r.failed = j.at("failed").get<bool>();
    r.error = j.at("error").get<std::string>();
    r.episode = episode_from_json(j.at("episode"));
    for (const auto& sj : j.at("scores")) r.iteration_scores.push_back(metric_score_from_json(sj));
    return r;
}

// Everything that determines a run's outputs, hashed into the run
// identity. Deliberately excludes out_dir, worker count, and resume
// state: those change where or how fast results appear, never what
// they are.
inline nlohmann::json config_fingerprint(const AgentConfig& config, double tau,
                                         const std::string& template_hash,
                                         const std::string& dataset_hash) {
    nlohmann::json j{{"mode", to_string(config.mode)},
                     {"max_iterations", config.max_iterations},
                     {"template_set", config.template_set},
                     {"template_hash", template_hash},
                     {"memory_char_budget", config.memory_char_budget},
                     {"temperature", config.generation.temperature},
                     {"max_tokens", config.generation.max_tokens},
                     {"tau", tau},
                     {"dataset_hash", dataset_hash}};
    if (config.generation.seed) j["seed"] = *config.generation.seed;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.good()) throw Error("cannot write file: " + path);
    out << content;
}

inline std::string format_one_decimal(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

}  // namespace detail

// Per-task means of the final-iteration scores, x100 as benchmark
// tables print them. The Average column is the unweighted mean over
// the task columns that actually appear, not over samples.
inline AggregateTable aggregate(const RunResult& run) {
    std::map<TaskType, std::pair<double, int>> sums;
    AggregateTable table;
    for (const auto& r : run.records) {
        if (r.failed) {
            ++table.failed_samples;
            continue;
        }
        auto& [sum, n] = sums[r.task];
        sum += r.iteration_scores.back().value;
        ++n;
        ++table.scored_samples;
    }
    if (table.scored_samples == 0) throw EmptyRunError("run has no scored samples");

    double total = 0.0;
    for (const TaskType t : task_column_order()) {
        const auto it = sums.find(t);
        if (it == sums.end()) continue;
        const double mean = it->second.first / it->second.second * 100.0;
        table.per_task.emplace_back(t, mean);
        total += mean;
    }
    table.average = total / static_cast<double>(table.per_task.size());
    return table;
}

struct CurvePoint {
    int iteration = 0;
    std::vector<std::pair<TaskType, double>> per_task;  // mean x100
    double average = 0.0;
};

// Mean score per task at each iteration 0..T, for trial-count plots.
inline std::vector<CurvePoint> iteration_curve(const RunResult& run) {
    if (!mode_is_iterative(run.mode))
        throw NotIterativeError("mode '" + to_string(run.mode) +
                                "' has no iterations to plot");
    std::vector<CurvePoint> curve;
    for (int t = 0; t <= run.max_iterations; ++t) {
        std::map<TaskType, std::pair<double, int>> sums;
        for (const auto& r : run.records) {
            if (r.failed) continue;
            auto& [sum, n] = sums[r.task];
            sum += r.iteration_scores[static_cast<std::size_t>(t)].value;
            ++n;
        }
        CurvePoint point;
        point.iteration = t;
        double total = 0.0;
        for (const TaskType task : task_column_order()) {
            const auto it = sums.find(task);
            if (it == sums.end()) continue;
            const double mean = it->second.first / it->second.second * 100.0;
            point.per_task.emplace_back(task, mean);
            total += mean;
        }
        if (!point.per_task.empty())
            point.average = total / static_cast<double>(point.per_task.size());
        curve.push_back(std::move(point));
    }
    return curve;
}

struct DeltaTable {
    std::vector<std::pair<TaskType, double>> per_task;  // a minus b, x100
    double average = 0.0;
    // paired per-sample final-score diffs for samples scored in both
    std::vector<std::pair<std::string, double>> sample_diffs;
};

inline DeltaTable compare_runs(const RunResult& a, const RunResult& b) {
    if (a.dataset_hash != b.dataset_hash)
        throw DatasetMismatchError("runs cover different datasets: " + a.dataset_hash +
                                   " vs " + b.dataset_hash);
    const AggregateTable ta = aggregate(a);
    const AggregateTable tb = aggregate(b);

    DeltaTable delta;
    std::map<TaskType, double> means_a(ta.per_task.begin(), ta.per_task.end());
    std::map<TaskType, double> means_b(tb.per_task.begin(), tb.per_task.end());
    for (const TaskType t : task_column_order()) {
        const auto ia = means_a.find(t);
        const auto ib = means_b.find(t);
        if (ia == means_a.end() || ib == means_b.end()) continue;
        delta.per_task.emplace_back(t, ia->second - ib->second);
    }
    delta.average = ta.average - tb.average;

    std::map<std::string, double> finals_b;
    for (const auto& r : b.records)
        if (!r.failed) finals_b[r.sample_id] = r.iteration_scores.back().value;
    for (const auto& r : a.records) {
        if (r.failed) continue;
        const auto it = finals_b.find(r.sample_id);
        if (it != finals_b.end())
            delta.sample_diffs.emplace_back(r.sample_id,
                                            r.iteration_scores.back().value - it->second);
    }
    return delta;
}

// ─────────────────────────── reports ───────────────────────────

inline std::string aggregate_csv(const AggregateTable& table) {
    std::string header = "column,score\n";
    std::string rows;
    for (const auto& [task, mean] : table.per_task)
        rows += to_string(task) + "," + detail::format_one_decimal(mean) + "\n";
    rows += "average," + detail::format_one_decimal(table.average) + "\n";
    return header + rows;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "iteration,column,score\n";
    for (const auto& point : curve) {
        for (const auto& [task, mean] : point.per_task)
            out += std::to_string(point.iteration) + "," + to_string(task) + "," +
                   detail::format_one_decimal(mean) + "\n";
        out += std::to_string(point.iteration) + ",average," +
               detail::format_one_decimal(point.average) + "\n";
    }
    return out;
}

inline std::string delta_csv(const DeltaTable& delta) {
    std::string out = "column,delta\n";
    for (const auto& [task, d] : delta.per_task)
        out += to_string(task) + "," + detail::format_one_decimal(d) + "\n";
    out += "average," + detail::format_one_decimal(delta.average) + "\n";
    return out;
}

// Aligned one-row table in benchmark-paper column order.
inline std::string render_aggregate_table(const AggregateTable& table, const std::string& label) {
    std::vector<std::string> headers{"method"};
    std::vector<std::string> cells{label};
    for (const auto& [task, mean] : table.per_task) {
        headers.push_back(to_string(task));
        cells.push_back(detail::format_one_decimal(mean));
    }
    headers.push_back("average");
    cells.push_back(detail::format_one_decimal(table.average));

    std::string head, rule, row;
    for (std::size_t i = 0; i < headers.size(); ++i) {
        const std::size_t width = std::max(headers[i].size(), cells[i].size());
        head += headers[i] + std::string(width - headers[i].size(), ' ') + "  ";
        rule += std::string(width, '-') + "  ";
        row += cells[i] + std::string(width - cells[i].size(), ' ') + "  ";
    }
    return head + "\n" + rule + "\n" + row + "\n";
}

// ──────────────────────── run execution ────────────────────────

namespace detail {

class CheckpointWriter {
  public:
    CheckpointWriter(const std::string& path, const std::string& run_id,
                     const std::string& config_hash, bool append)
        : path_(path) {
        out_.open(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
        if (!out_.good()) throw Error("cannot write checkpoint: " + path);
        if (!append) {
            out_ << nlohmann::json{{"run_id", run_id}, {"config_hash", config_hash}}.dump()
                 << '\n';
            out_.flush();
        }
    }

    void append_record(const SampleRecord& record) {
        out_ << record_to_json(record).dump() << '\n';
        out_.flush();
    }

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
};

inline std::map<std::string, SampleRecord> read_checkpoint(const std::string& path,
                                                           const std::string& config_hash) {
    std::map<std::string, SampleRecord> completed;
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return completed;
    std::string line;
    if (!std::getline(in, line)) return completed;
    const nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.contains("config_hash"))
        throw ConfigError("checkpoint header unreadable: " + path);
    if (header.at("config_hash").get<std::string>() != config_hash)
        throw ConfigError("checkpoint belongs to a different configuration; refusing to resume");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SampleRecord r = record_from_json(nlohmann::json::parse(line));
        completed[r.sample_id] = std::move(r);
    }
    return completed;
}

inline SampleRecord execute_sample(const Sample& sample, const AgentConfig& config,
                                   ModelBackend& backend, const Taxonomy& taxonomy, double tau) {
    SampleRecord record;
    record.sample_id = sample.id;
    record.task = sample.task_type;
    try {
        record.episode = run_episode(sample, config, backend, taxonomy);
        for (const auto& answer : record.episode.answers)
            record.iteration_scores.push_back(score_answer(sample, answer, tau));
    } catch (const EpisodeAborted& e) {
        record.failed = true;
        record.error = e.what();
        record.episode = e.partial;
    } catch (const BackendError& e) {
        record.failed = true;
        record.error = e.what();
    } catch (const ImageReadError& e) {
        record.failed = true;
        record.error = e.what();
    } catch (const UnsupportedMediaTypeError& e) {
        record.failed = true;
        record.error = e.what();
    }
    return record;
}

inline void persist_run(const RunResult& result, const HarnessOptions& options,
                        const nlohmann::json& snapshot) {
    const std::string dir = options.out_dir;
    write_text_file(dir + "/config_snapshot.json", snapshot.dump(2) + "\n");

    std::vector<EpisodeState> episodes;
    std::string scores_jsonl;
    std::string checkpoint;
    checkpoint += nlohmann::json{{"run_id", result.run_id},
                                 {"config_hash", result.config_hash}}
                      .dump() +
                  "\n";
    for (const auto& r : result.records) {
        episodes.push_back(r.episode);
        nlohmann::json scores = nlohmann::json::array();
        for (const auto& s : r.iteration_scores) scores.push_back(metric_score_to_json(s));
        scores_jsonl += nlohmann::json{{"sample_id", r.sample_id},
                                       {"task", to_string(r.task)},
                                       {"failed", r.failed},
                                       {"error", r.error},
                                       {"scores", std::move(scores)}}
                            .dump() +
                        "\n";
        checkpoint += record_to_json(r).dump() + "\n";
    }
    write_traces(dir + "/traces.jsonl", episodes);
    write_text_file(dir + "/scores.jsonl", scores_jsonl);
    // checkpoint rewritten in dataset order so an interrupted-then-
    // resumed run leaves the same bytes as an uninterrupted one
    write_text_file(dir + "/checkpoint.jsonl", checkpoint);

    const AggregateTable table = aggregate(result);
    nlohmann::json per_task = nlohmann::json::array();
    for (const auto& [task, mean] : table.per_task)
        per_task.push_back({{"task", to_string(task)}, {"score", mean}});
    const nlohmann::json agg{{"per_task", std::move(per_task)},
                             {"average", table.average},
                             {"scored_samples", table.scored_samples},
                             {"failed_samples", table.failed_samples}};
    write_text_file(dir + "/aggregate.json", agg.dump(2) + "\n");

    const nlohmann::json result_json{{"run_id", result.run_id},
                                     {"mode", to_string(result.mode)},
                                     {"max_iterations", result.max_iterations},
                                     {"tau", result.tau},
                                     {"config_hash", result.config_hash},
                                     {"template_hash", result.template_hash},
                                     {"dataset_hash", result.dataset_hash},
                                     {"failed_count", result.failed_count},
                                     {"samples", result.records.size()},
                                     {"aggregate", agg}};
    write_text_file(dir + "/result.json", result_json.dump(2) + "\n");

    std::string report = render_aggregate_table(table, to_string(result.mode));
    report += "\nscored samples: " + std::to_string(table.scored_samples) +
              ", failed: " + std::to_string(table.failed_samples) + "\n";
    write_text_file(dir + "/report.txt", report);

    // the only artifact allowed to differ between identical runs
    write_text_file(dir + "/timing.json",
                    nlohmann::json{{"wall_ms", result.wall_ms}}.dump(2) + "\n");
}

}  // namespace detail

// Runs every sample through the episode loop, scores each intermediate
// answer, checkpoints after every sample, and persists the run
// artifacts. Worker count changes throughput only; records land in
// dataset order regardless.
inline RunResult run_benchmark(const std::vector<Sample>& samples, const AgentConfig& config,
                               ModelBackend& backend, const HarnessOptions& options,
                               const std::string& dataset_hash,
                               const Taxonomy& taxonomy = default_taxonomy()) {
    validate_agent_config(config);
    const TemplateSet templates = resolve_template_set(config.template_set);

    RunResult result;
    result.mode = config.mode;
    result.max_iterations = config.max_iterations;
    result.tau = options.tau;
    result.template_hash = templates.hash();
    result.dataset_hash = dataset_hash;

    const nlohmann::json fingerprint =
        detail::config_fingerprint(config, options.tau, result.template_hash, dataset_hash);
    result.config_hash = hex64(fnv1a(fingerprint.dump()));
    result.run_id = "run-" + result.config_hash;

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw Error("cannot create out dir: " + options.out_dir + ": " + ec.message());

    nlohmann::json snapshot = fingerprint;
    snapshot["run_id"] = result.run_id;
    for (const auto& [key, value] : options.extra_config.items()) snapshot[key] = value;

    const std::string checkpoint_path = options.out_dir + "/checkpoint.jsonl";
    std::map<std::string, SampleRecord> completed;
    if (options.resume)
        completed = detail::read_checkpoint(checkpoint_path, result.config_hash);

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (!completed.count(samples[i].id)) pending.push_back(i);

    const auto started = std::chrono::steady_clock::now();
    std::map<std::string, SampleRecord> fresh;
    {
        detail::CheckpointWriter checkpoint(checkpoint_path, result.run_id, result.config_hash,
                                            options.resume && !completed.empty());
        std::mutex mu;
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        std::size_t done = completed.size();

        auto worker = [&]() {
            while (!stop.load()) {
                const std::size_t slot = next.fetch_add(1);
                if (slot >= pending.size()) return;
                const Sample& sample = samples[pending[slot]];
                SampleRecord record =
                    detail::execute_sample(sample, config, backend, taxonomy, options.tau);
                std::lock_guard<std::mutex> lock(mu);
                checkpoint.append_record(record);
                fresh[record.sample_id] = std::move(record);
                ++done;
                if (options.stop_after && options.stop_after(done)) stop.store(true);
            }
        };

        const int n_workers =
            std::max(1, std::min<int>(options.workers, static_cast<int>(pending.size())));
        std::vector<std::thread> threads;
        for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        result.interrupted = stop.load();
    }
    result.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();

    for (const auto& sample : samples) {
        const auto in_fresh = fresh.find(sample.id);
        if (in_fresh != fresh.end()) {
            result.records.push_back(in_fresh->second);
        } else {
            const auto in_completed = completed.find(sample.id);
            if (in_completed != completed.end()) result.records.push_back(in_completed->second);
        }
    }
    for (const auto& r : result.records)
        if (r.failed) ++result.failed_count;

    if (!result.interrupted) detail::persist_run(result, options, snapshot);
    return result;
}

}  // namespace ocrloop
