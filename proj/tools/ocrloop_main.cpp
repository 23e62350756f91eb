// Command-line front end: run benchmarks, report results, validate
// datasets, and score externally produced predictions.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocrloop/agent.hpp"
#include "ocrloop/config.hpp"
#include "ocrloop/dataset.hpp"
#include "ocrloop/harness.hpp"
#include "ocrloop/http_backend.hpp"
#include "ocrloop/mock_backend.hpp"
#include "ocrloop/scoring.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// flag > OCRLOOP_* environment > config file > default
std::string resolve(const ocrloop::ConfigResolver& resolver, const std::string& key,
                    const std::string& flag_value, bool flag_given,
                    const std::string& default_value) {
    return resolver.resolve(
        key, flag_given ? std::optional<std::string>(flag_value) : std::nullopt, default_value);
}

// Fixture file: {"<sample_id>": {"initial": text, "reflect@1": text,
// "refine@1": text, ...}, ...}
void load_fixture(ocrloop::ScriptedBackend& backend, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot read fixture file: " + path);
    nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object())
        throw std::runtime_error("fixture file is not a JSON object: " + path);

    for (const auto& [sample_id, entries] : parsed.items()) {
        for (const auto& [key, text] : entries.items()) {
            ocrloop::CallKind kind;
            int iteration = 0;
            const auto at = key.find('@');
            const std::string kind_str = at == std::string::npos ? key : key.substr(0, at);
            const auto parsed_kind = ocrloop::parse_call_kind(kind_str);
            if (!parsed_kind)
                throw std::runtime_error("fixture key '" + key + "' has unknown call kind");
            kind = *parsed_kind;
            if (at != std::string::npos) iteration = std::stoi(key.substr(at + 1));
            backend.script(sample_id, kind, iteration, text.get<std::string>());
        }
    }
}

int cmd_run(const std::string& dataset_path, const std::string& out_dir,
            const std::string& mode_str, int max_iterations, bool max_iterations_given,
            const std::string& backend_kind, const std::string& fixture_path,
            const ocrloop::HttpBackendConfig& http_config, int workers, double tau,
            const std::string& template_set, const std::string& taxonomy_path, bool resume,
            bool strict) {
    const auto mode = ocrloop::parse_agent_mode(mode_str);
    if (!mode) throw UsageError("unknown mode '" + mode_str + "'");

    ocrloop::AgentConfig config;
    config.mode = *mode;
    config.template_set = template_set;
    if (max_iterations_given) {
        if (!ocrloop::mode_is_iterative(*mode) && max_iterations != 0)
            throw UsageError("mode '" + mode_str + "' does not iterate; --max-iterations must be 0");
        config.max_iterations = max_iterations;
    } else {
        config.max_iterations = ocrloop::mode_is_iterative(*mode) ? 3 : 0;
    }

    std::unique_ptr<ocrloop::ModelBackend> backend;
    if (backend_kind == "mock") {
        if (fixture_path.empty())
            throw UsageError("--backend mock requires --fixture <responses.json>");
        auto mock = std::make_unique<ocrloop::ScriptedBackend>();
        load_fixture(*mock, fixture_path);
        backend = std::move(mock);
    } else if (backend_kind == "http") {
        backend = std::make_unique<ocrloop::HttpBackend>(http_config);
    } else {
        throw UsageError("unknown backend '" + backend_kind + "' (use mock or http)");
    }

    const ocrloop::LoadReport report = ocrloop::load_dataset(dataset_path, strict);
    for (const auto& d : report.diagnostics)
        std::cerr << "dataset line " << d.line << ": " << d.message << "\n";
    if (report.samples.empty()) throw std::runtime_error("dataset has no usable samples");

    ocrloop::Taxonomy taxonomy = ocrloop::default_taxonomy();
    if (!taxonomy_path.empty()) {
        std::ifstream in(taxonomy_path, std::ios::binary);
        if (!in.good()) throw std::runtime_error("cannot read taxonomy file: " + taxonomy_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        taxonomy = ocrloop::load_taxonomy(buf.str());
    }

    ocrloop::HarnessOptions options;
    options.out_dir = out_dir;
    options.workers = workers;
    options.tau = tau;
    options.resume = resume;
    options.extra_config = {{"backend", backend_kind}, {"dataset", dataset_path}};

    const ocrloop::RunResult result =
        ocrloop::run_benchmark(report.samples, config, *backend, options,
                               ocrloop::dataset_hash(dataset_path), taxonomy);

    std::cout << ocrloop::render_aggregate_table(ocrloop::aggregate(result),
                                                 ocrloop::to_string(result.mode));
    if (result.failed_count > 0)
        std::cout << "failed samples: " << result.failed_count << " (excluded from aggregates)\n";
    std::cout << "run directory: " << out_dir << "\n";
    return kExitOk;
}

// Rebuilds a RunResult from a run directory's result.json metadata and
// checkpoint records.
ocrloop::RunResult load_run(const std::string& dir) {
    std::ifstream meta(dir + "/result.json", std::ios::binary);
    if (!meta.good()) throw std::runtime_error("not a run directory (no result.json): " + dir);
    nlohmann::json result_json = nlohmann::json::parse(meta);

    ocrloop::RunResult run;
    run.run_id = result_json.at("run_id").get<std::string>();
    const auto mode = ocrloop::parse_agent_mode(result_json.at("mode").get<std::string>());
    if (!mode) throw std::runtime_error("run metadata has unknown mode");
    run.mode = *mode;
    run.max_iterations = result_json.at("max_iterations").get<int>();
    run.tau = result_json.at("tau").get<double>();
    run.config_hash = result_json.at("config_hash").get<std::string>();
    run.template_hash = result_json.at("template_hash").get<std::string>();
    run.dataset_hash = result_json.at("dataset_hash").get<std::string>();
    run.failed_count = result_json.at("failed_count").get<std::size_t>();

    std::ifstream in(dir + "/checkpoint.jsonl", std::ios::binary);
    if (!in.good()) throw std::runtime_error("run directory has no checkpoint.jsonl: " + dir);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        run.records.push_back(ocrloop::detail::record_from_json(nlohmann::json::parse(line)));
    }
    return run;
}

int cmd_report(const std::string& run_dir, const std::string& compare_dir, bool curves,
               const std::string& format) {
    const ocrloop::RunResult run = load_run(run_dir);

    if (!compare_dir.empty()) {
        const ocrloop::RunResult other = load_run(compare_dir);
        const ocrloop::DeltaTable delta = ocrloop::compare_runs(run, other);
        if (format == "csv") {
            std::cout << ocrloop::delta_csv(delta);
        } else {
            std::cout << "delta (" << ocrloop::to_string(run.mode) << " minus "
                      << ocrloop::to_string(other.mode) << ")\n";
            for (const auto& [task, d] : delta.per_task)
                std::printf("  %-14s %+.1f\n", ocrloop::to_string(task).c_str(), d);
            std::printf("  %-14s %+.1f\n", "average", delta.average);
        }
        return kExitOk;
    }

    if (curves) {
        const auto curve = ocrloop::iteration_curve(run);
        std::cout << ocrloop::curve_csv(curve);
        return kExitOk;
    }

    const ocrloop::AggregateTable table = ocrloop::aggregate(run);
    if (format == "csv") {
        std::cout << ocrloop::aggregate_csv(table);
    } else if (format == "json") {
        nlohmann::json per_task = nlohmann::json::array();
        for (const auto& [task, mean] : table.per_task)
            per_task.push_back({{"task", ocrloop::to_string(task)}, {"score", mean}});
        std::cout << nlohmann::json{{"per_task", per_task}, {"average", table.average}}.dump(2)
                  << "\n";
    } else {
        std::cout << ocrloop::render_aggregate_table(table, ocrloop::to_string(run.mode));
        if (run.failed_count > 0) std::cout << "failed samples: " << run.failed_count << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& dataset_path) {
    const ocrloop::LoadReport report = ocrloop::load_dataset(dataset_path, false);
    for (const auto& d : report.diagnostics)
        std::cout << "line " << d.line << ": " << d.message << "\n";
    std::cout << report.samples.size() << " samples, " << report.diagnostics.size()
              << " errors\n";
    return report.diagnostics.empty() ? kExitOk : kExitRuntime;
}

int cmd_score(const std::string& dataset_path, const std::string& predictions_path, double tau) {
    const ocrloop::LoadReport report = ocrloop::load_dataset(dataset_path, false);
    std::map<std::string, const ocrloop::Sample*> by_id;
    for (const auto& s : report.samples) by_id[s.id] = &s;

    std::ifstream in(predictions_path, std::ios::binary);
    if (!in.good()) throw std::runtime_error("cannot read predictions file: " + predictions_path);

    ocrloop::RunResult pseudo;
    pseudo.mode = ocrloop::AgentMode::Naive;
    pseudo.max_iterations = 0;
    std::size_t unknown = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (ocrloop::trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("answer")) {
            std::cerr << "predictions line " << line_no << ": expected {\"id\", \"answer\"}\n";
            continue;
        }
        const std::string id = j.at("id").get<std::string>();
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            std::cerr << "unknown sample id '" << id << "'\n";
            ++unknown;
            continue;
        }
        ocrloop::SampleRecord record;
        record.sample_id = id;
        record.task = it->second->task_type;
        record.iteration_scores.push_back(
            ocrloop::score_answer(*it->second, j.at("answer").get<std::string>(), tau));
        pseudo.records.push_back(std::move(record));
    }

    if (pseudo.records.empty()) {
        std::cout << "no predictions scored\n";
        return kExitOk;
    }
    std::cout << ocrloop::render_aggregate_table(ocrloop::aggregate(pseudo), "predictions");
    std::cout << "scored " << pseudo.records.size() << " of " << report.samples.size()
              << " samples";
    if (unknown > 0) std::cout << " (" << unknown << " unknown ids skipped)";
    std::cout << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iterative self-correction harness for OCR benchmarks"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags and OCRLOOP_* env win)");

    // run
    auto* run = app.add_subcommand("run", "execute a benchmark run");
    std::string dataset, out_dir, mode = "full", backend = "mock", fixture, template_set,
                                  taxonomy_path, base_url, model, api_key;
    int max_iterations = 3;
    int workers = 1;
    double tau = 0.5;
    bool resume = false, strict = false;
    auto* dataset_opt = run->add_option("--dataset", dataset, "dataset JSONL file");
    auto* out_opt = run->add_option("--out", out_dir, "output run directory");
    auto* mode_opt = run->add_option("--mode", mode, "naive|cot|self_refine|capability_only|memory_only|full");
    auto* iters_opt = run->add_option("--max-iterations", max_iterations, "reflect/refine rounds");
    auto* backend_opt = run->add_option("--backend", backend, "mock|http");
    auto* fixture_opt = run->add_option("--fixture", fixture, "scripted responses (mock backend)");
    auto* base_url_opt = run->add_option("--base-url", base_url, "endpoint base URL (http backend)");
    auto* model_opt = run->add_option("--model", model, "model name (http backend)");
    auto* api_key_opt = run->add_option("--api-key", api_key, "bearer token (http backend)");
    auto* workers_opt = run->add_option("--workers", workers, "parallel samples");
    auto* tau_opt = run->add_option("--tau", tau, "similarity threshold for text scoring");
    auto* templates_opt = run->add_option("--templates", template_set,
                                          "template bundle: 'default' or a directory");
    auto* taxonomy_opt = run->add_option("--taxonomy", taxonomy_path, "capability rules file");
    run->add_flag("--resume", resume, "resume from the run directory's checkpoint");
    run->add_flag("--strict", strict, "abort on the first malformed dataset line");

    // report
    auto* report = app.add_subcommand("report", "print tables for a finished run");
    std::string run_dir, compare_dir, format = "table";
    bool curves = false;
    report->add_option("--run", run_dir, "run directory")->required();
    report->add_option("--compare", compare_dir, "second run directory to diff against");
    report->add_flag("--curves", curves, "emit per-iteration curve CSV");
    report->add_option("--format", format, "table|csv|json");

    // validate
    auto* validate = app.add_subcommand("validate", "check a dataset file's schema");
    std::string validate_dataset;
    validate->add_option("--dataset", validate_dataset, "dataset JSONL file")->required();

    // score
    auto* score = app.add_subcommand("score", "score externally produced answers");
    std::string score_dataset, predictions;
    double score_tau = 0.5;
    score->add_option("--dataset", score_dataset, "dataset JSONL file")->required();
    score->add_option("--predictions", predictions, "JSONL of {\"id\", \"answer\"}")->required();
    score->add_option("--tau", score_tau, "similarity threshold for text scoring");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            nlohmann::json file_config = nlohmann::json::object();
            if (!config_path.empty()) file_config = ocrloop::load_config_file(config_path);
            const ocrloop::ConfigResolver resolver(file_config);

            dataset = resolve(resolver, "dataset", dataset, dataset_opt->count() > 0, "");
            if (dataset.empty()) throw UsageError("missing --dataset");
            out_dir = resolve(resolver, "out", out_dir, out_opt->count() > 0, "");
            if (out_dir.empty()) throw UsageError("missing --out");
            mode = resolve(resolver, "mode", mode, mode_opt->count() > 0, "full");
            backend = resolve(resolver, "backend", backend, backend_opt->count() > 0, "mock");
            fixture = resolve(resolver, "fixture", fixture, fixture_opt->count() > 0, "");
            template_set =
                resolve(resolver, "templates", template_set, templates_opt->count() > 0, "default");
            taxonomy_path =
                resolve(resolver, "taxonomy", taxonomy_path, taxonomy_opt->count() > 0, "");

            ocrloop::HttpBackendConfig http_config;
            http_config.base_url = resolve(resolver, "base-url", base_url,
                                           base_url_opt->count() > 0, http_config.base_url);
            http_config.model =
                resolve(resolver, "model", model, model_opt->count() > 0, http_config.model);
            http_config.api_key =
                resolve(resolver, "api-key", api_key, api_key_opt->count() > 0, "");

            const std::string workers_str =
                resolve(resolver, "workers", std::to_string(workers), workers_opt->count() > 0, "1");
            const std::string tau_str =
                resolve(resolver, "tau", std::to_string(tau), tau_opt->count() > 0, "0.5");
            const bool iters_given =
                iters_opt->count() > 0 || resolver.resolve("max-iterations", std::nullopt, "") != "";
            const std::string iters_str =
                resolve(resolver, "max-iterations", std::to_string(max_iterations),
                        iters_opt->count() > 0, "3");

            return cmd_run(dataset, out_dir, mode, std::stoi(iters_str), iters_given, backend,
                           fixture, http_config, std::stoi(workers_str), std::stod(tau_str),
                           template_set, taxonomy_path, resume, strict);
        }
        if (report->parsed()) return cmd_report(run_dir, compare_dir, curves, format);
        if (validate->parsed()) return cmd_validate(validate_dataset);
        if (score->parsed()) return cmd_score(score_dataset, predictions, score_tau);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ocrloop::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
