#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocrloop/agent.hpp"
#include "ocrloop/errors.hpp"

namespace ocrloop {

namespace detail {

inline nlohmann::json action_to_json(const PlanAction& a) {
    nlohmann::json j{{"text", a.text},
                     {"verdict", to_string(a.verdict)},
                     {"category", to_string(a.category)}};
    if (a.matched_rule) j["matched_rule"] = *a.matched_rule;
    return j;
}

inline PlanAction action_from_json(const nlohmann::json& j) {
    PlanAction a;
    a.text = j.at("text").get<std::string>();
    const auto verdict = parse_verdict(j.at("verdict").get<std::string>());
    const auto category = parse_category(j.at("category").get<std::string>());
    if (!verdict || !category) throw Error("trace action has unknown verdict or category");
    a.verdict = *verdict;
    a.category = *category;
    if (j.contains("matched_rule")) a.matched_rule = j.at("matched_rule").get<std::string>();
    return a;
}

}  // namespace detail

inline nlohmann::json episode_to_json(const EpisodeState& state) {
    nlohmann::json reflections = nlohmann::json::array();
    for (const auto& r : state.reflections) {
        nlohmann::json extracted = nlohmann::json::array();
        for (const auto& a : r.extracted_plan) extracted.push_back(detail::action_to_json(a));
        nlohmann::json feasible = nlohmann::json::array();
        for (const auto& a : r.feasible_plan) feasible.push_back(detail::action_to_json(a));
        reflections.push_back({{"iteration", r.iteration},
                               {"text", r.text},
                               {"extracted_plan", std::move(extracted)},
                               {"feasible_plan", std::move(feasible)}});
    }
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : state.call_trace)
        trace.push_back({{"kind", to_string(t.kind)},
                         {"iteration", t.iteration},
                         {"digest", t.digest}});
    return nlohmann::json{{"sample_id", state.sample_id},
                          {"mode", to_string(state.mode)},
                          {"memory_truncated", state.memory_truncated},
                          {"answers", state.answers},
                          {"reflections", std::move(reflections)},
                          {"call_trace", std::move(trace)}};
}

// Rebuilds an episode, reconstructing the memory store by replaying
// the reflections in order.
inline EpisodeState episode_from_json(const nlohmann::json& j) {
    EpisodeState state;
    state.sample_id = j.at("sample_id").get<std::string>();
    const auto mode = parse_agent_mode(j.at("mode").get<std::string>());
    if (!mode) throw Error("trace has unknown mode '" + j.at("mode").get<std::string>() + "'");
    state.mode = *mode;
    state.memory_truncated = j.at("memory_truncated").get<bool>();
    state.answers = j.at("answers").get<std::vector<std::string>>();

    for (const auto& rj : j.at("reflections")) {
        ReflectionRecord r;
        r.iteration = rj.at("iteration").get<int>();
        r.text = rj.at("text").get<std::string>();
        for (const auto& aj : rj.at("extracted_plan"))
            r.extracted_plan.push_back(detail::action_from_json(aj));
        for (const auto& aj : rj.at("feasible_plan"))
            r.feasible_plan.push_back(detail::action_from_json(aj));
        state.reflections.push_back(r);
        state.memory.append(std::move(r));
    }

    for (const auto& tj : j.at("call_trace")) {
        const auto kind = parse_call_kind(tj.at("kind").get<std::string>());
        if (!kind) throw Error("trace has unknown call kind");
        state.call_trace.push_back(
            TraceEntry{*kind, tj.at("iteration").get<int>(), tj.at("digest").get<std::string>()});
    }
    return state;
}

inline void write_traces(const std::string& path, const std::vector<EpisodeState>& episodes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.good()) throw Error("cannot write trace file: " + path);
    for (const auto& e : episodes) out << episode_to_json(e).dump() << '\n';
}

inline std::vector<EpisodeState> read_traces(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw Error("cannot read trace file: " + path);
    std::vector<EpisodeState> episodes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        episodes.push_back(episode_from_json(nlohmann::json::parse(line)));
    }
    return episodes;
}

}  // namespace ocrloop
