#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocrloop/backend.hpp"
#include "ocrloop/capability.hpp"
#include "ocrloop/dataset.hpp"
#include "ocrloop/errors.hpp"
#include "ocrloop/image.hpp"
#include "ocrloop/plan.hpp"
#include "ocrloop/templates.hpp"

namespace ocrloop {

enum class AgentMode { Naive, Cot, SelfRefine, CapabilityOnly, MemoryOnly, Full };

inline std::string to_string(AgentMode m) {
    switch (m) {
        case AgentMode::Naive: return "naive";
        case AgentMode::Cot: return "cot";
        case AgentMode::SelfRefine: return "self_refine";
        case AgentMode::CapabilityOnly: return "capability_only";
        case AgentMode::MemoryOnly: return "memory_only";
        default: return "full";
    }
}

inline std::optional<AgentMode> parse_agent_mode(std::string_view s) {
    if (s == "naive") return AgentMode::Naive;
    if (s == "cot") return AgentMode::Cot;
    if (s == "self_refine") return AgentMode::SelfRefine;
    if (s == "capability_only") return AgentMode::CapabilityOnly;
    if (s == "memory_only") return AgentMode::MemoryOnly;
    if (s == "full") return AgentMode::Full;
    return std::nullopt;
}

// Modes that run the reflect/refine loop at all.
inline bool mode_is_iterative(AgentMode m) {
    return m != AgentMode::Naive && m != AgentMode::Cot;
}

// Whether the loop keeps the whole reflection history or only the
// latest reflection when rendering prompts.
inline bool mode_keeps_memory(AgentMode m) {
    return m == AgentMode::MemoryOnly || m == AgentMode::Full;
}

// Whether the capability filter gates which plan actions reach the
// refinement prompt. Classification always happens either way; this
// only controls prompt content.
inline bool mode_filters_plan(AgentMode m) {
    return m == AgentMode::CapabilityOnly || m == AgentMode::Full;
}

struct AgentConfig {
    int max_iterations = 3;
    AgentMode mode = AgentMode::Full;
    std::string template_set = "default";
    GenerationParams generation;
    std::size_t memory_char_budget = 0;  // 0 = unlimited
};

// Rejects configs the loop cannot honor. Zero iterations is legal for
// every mode (an iterative mode with T = 0 degenerates to the initial
// pass); a positive count is meaningless for the non-loop modes.
inline void validate_agent_config(const AgentConfig& config) {
    if (config.max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
    if (!mode_is_iterative(config.mode) && config.max_iterations != 0)
        throw ConfigError("mode '" + to_string(config.mode) +
                          "' does not iterate; max_iterations must be 0");
}

struct ReflectionRecord {
    int iteration = 0;
    std::string text;
    std::vector<PlanAction> extracted_plan;
    std::vector<PlanAction> feasible_plan;
};

// Append-only, strictly sequential reflection history.
class MemoryStore {
  public:
    void append(ReflectionRecord record) {
        if (record.iteration != static_cast<int>(records_.size()) + 1)
            throw SequenceError("memory expects iteration " +
                                std::to_string(records_.size() + 1) + ", got " +
                                std::to_string(record.iteration));
        records_.push_back(std::move(record));
    }

    const std::vector<ReflectionRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

  private:
    std::vector<ReflectionRecord> records_;
};

inline MemoryStore update_memory(MemoryStore memory, ReflectionRecord record) {
    memory.append(std::move(record));
    return memory;
}

struct TraceEntry {
    CallKind kind = CallKind::Initial;
    int iteration = 0;
    std::string digest;
};

struct EpisodeState {
    std::string sample_id;
    AgentMode mode = AgentMode::Full;
    std::vector<std::string> answers;  // A_0 .. A_T
    std::vector<ReflectionRecord> reflections;
    MemoryStore memory;
    std::vector<TraceEntry> call_trace;
    bool memory_truncated = false;

    const std::string& final_answer() const { return answers.back(); }
};

// Backend failure mid-episode. Still a BackendError, but carries what
// completed before the failure so the harness can record it.
struct EpisodeAborted : BackendError {
    EpisodeAborted(const BackendError& cause, EpisodeState state)
        : BackendError(cause.what(), cause.http_status, cause.retries),
          partial(std::move(state)) {}
    EpisodeState partial;
};

// The model's reply minus scaffolding: everything after the last
// answer marker, or the whole reply when the marker is missing.
inline std::string extract_final_answer(const std::string& completion) {
    std::string answer;
    const auto pos = completion.rfind(kAnswerMarker);
    if (pos == std::string::npos)
        answer = trim(completion);
    else
        answer = trim(completion.substr(pos + kAnswerMarker.size()));
    if (answer.empty()) throw BackendError("backend returned no usable answer text");
    return answer;
}

namespace detail {

struct EpisodeContext {
    const Sample& sample;
    const AgentConfig& config;
    const Taxonomy& taxonomy;
    TemplateSet templates;
    ImagePayload image;
    ModelBackend& backend;
};

inline std::string call_backend(EpisodeContext& ctx, EpisodeState& state, CallKind kind,
                                int iteration, std::vector<Message> messages) {
    ModelRequest request;
    request.image = ctx.image;
    request.messages = std::move(messages);
    request.params = ctx.config.generation;
    request.tag = CallTag{ctx.sample.id, kind, iteration};
    std::string response;
    try {
        response = ctx.backend.generate(request);
    } catch (const EpisodeAborted&) {
        throw;  // never re-wrap
    } catch (const BackendError& e) {
        throw EpisodeAborted(e, state);
    }
    state.call_trace.push_back(TraceEntry{kind, iteration, request_digest(request)});
    return response;
}

// Which reflections a prompt may see: the whole store for the
// memory-keeping modes, nothing (reflect) or just the latest entry
// (refine) otherwise.
inline std::vector<MemoryEntryView> memory_view(const std::vector<ReflectionRecord>& records,
                                                AgentMode mode, bool include_last_only) {
    std::vector<MemoryEntryView> entries;
    if (mode_keeps_memory(mode)) {
        for (const auto& r : records) entries.push_back({r.iteration, r.text});
    } else if (include_last_only && !records.empty()) {
        entries.push_back({records.back().iteration, records.back().text});
    }
    return entries;
}

inline std::string do_initial(EpisodeContext& ctx, EpisodeState& state) {
    const auto& tmpl = ctx.config.mode == AgentMode::Cot ? ctx.templates.zero_shot_cot
                                                         : ctx.templates.zero_shot;
    const auto messages = render(tmpl,
                                 {{"question", ctx.sample.question},
                                  {"answer_marker", std::string(kAnswerMarker)}},
                                 ctx.templates.system_preamble);
    return extract_final_answer(call_backend(ctx, state, CallKind::Initial, 0, messages));
}

inline ReflectionRecord do_reflect(EpisodeContext& ctx, EpisodeState& state, int iteration,
                                   const std::string& prev_answer, const MemoryStore& memory) {
    const auto entries = memory_view(memory.records(), ctx.config.mode, false);
    const auto expanded = expand_memory(entries, ctx.config.memory_char_budget);
    state.memory_truncated = state.memory_truncated || expanded.truncated;

    const auto messages = render(ctx.templates.reflection,
                                 {{"question", ctx.sample.question},
                                  {"prev_answer", prev_answer},
                                  {"memory", expanded.text}},
                                 ctx.templates.system_preamble);
    const std::string text = call_backend(ctx, state, CallKind::Reflect, iteration, messages);

    ReflectionRecord record;
    record.iteration = iteration;
    record.text = text;
    for (auto& action : extract_plan(text))
        record.extracted_plan.push_back(classify_action(std::move(action), ctx.taxonomy));
    record.feasible_plan = filter_plan(record.extracted_plan, ctx.taxonomy).feasible;
    return record;
}

inline std::string do_refine(EpisodeContext& ctx, EpisodeState& state, int iteration,
                             const std::string& prev_answer,
                             const std::vector<PlanAction>& plan_actions,
                             const std::vector<ReflectionRecord>& memory_with_current) {
    const auto entries = memory_view(memory_with_current, ctx.config.mode, true);
    const auto expanded = expand_memory(entries, ctx.config.memory_char_budget);
    state.memory_truncated = state.memory_truncated || expanded.truncated;

    std::vector<std::string> action_texts;
    for (const auto& a : plan_actions) action_texts.push_back(a.text);

    const auto messages = render(ctx.templates.refinement,
                                 {{"question", ctx.sample.question},
                                  {"prev_answer", prev_answer},
                                  {"memory", expanded.text},
                                  {"plan", expand_plan(action_texts)},
                                  {"answer_marker", std::string(kAnswerMarker)}},
                                 ctx.templates.system_preamble);
    return extract_final_answer(call_backend(ctx, state, CallKind::Refine, iteration, messages));
}

inline EpisodeContext make_context(const Sample& sample, const AgentConfig& config,
                                   ModelBackend& backend, const Taxonomy& taxonomy) {
    validate_agent_config(config);
    TemplateSet templates = resolve_template_set(config.template_set);
    // image problems surface here, before any backend traffic
    ImagePayload image = encode_image_file(sample.image_ref);
    return EpisodeContext{sample, config, taxonomy, std::move(templates), std::move(image),
                          backend};
}

}  // namespace detail

// One full pass of the correction loop: zero-shot answer, then T
// rounds of reflect -> extract plan -> filter -> refine, with the
// reflection memory growing by one record per round.
inline EpisodeState run_episode(const Sample& sample, const AgentConfig& config,
                                ModelBackend& backend,
                                const Taxonomy& taxonomy = default_taxonomy()) {
    auto ctx = detail::make_context(sample, config, backend, taxonomy);

    EpisodeState state;
    state.sample_id = sample.id;
    state.mode = config.mode;

    state.answers.push_back(detail::do_initial(ctx, state));

    for (int i = 1; i <= config.max_iterations; ++i) {
        ReflectionRecord record =
            detail::do_reflect(ctx, state, i, state.answers.back(), state.memory);

        const auto& plan_for_prompt =
            mode_filters_plan(config.mode) ? record.feasible_plan : record.extracted_plan;

        std::vector<ReflectionRecord> memory_with_current = state.memory.records();
        memory_with_current.push_back(record);

        const std::string refined = detail::do_refine(ctx, state, i, state.answers.back(),
                                                      plan_for_prompt, memory_with_current);

        state.answers.push_back(refined);
        state.reflections.push_back(record);
        state.memory = update_memory(std::move(state.memory), std::move(record));
    }
    return state;
}

// Standalone zero-shot pass, also usable outside the loop.
inline std::string initial_answer(const Sample& sample, ModelBackend& backend,
                                  const AgentConfig& config) {
    auto ctx = detail::make_context(sample, config, backend, default_taxonomy());
    EpisodeState scratch;
    scratch.sample_id = sample.id;
    return detail::do_initial(ctx, scratch);
}

// One reflection round against an existing memory. The new record's
// iteration continues the store's sequence.
inline ReflectionRecord reflect(const Sample& sample, const std::string& prev_answer,
                                const MemoryStore& memory, ModelBackend& backend,
                                const AgentConfig& config,
                                const Taxonomy& taxonomy = default_taxonomy()) {
    if (prev_answer.empty()) throw ConfigError("reflect requires a nonempty previous answer");
    auto ctx = detail::make_context(sample, config, backend, taxonomy);
    EpisodeState scratch;
    scratch.sample_id = sample.id;
    return detail::do_reflect(ctx, scratch, static_cast<int>(memory.size()) + 1, prev_answer,
                              memory);
}

// One refinement round. memory_including_current must already end with
// the reflection produced this round.
inline std::string refine(const Sample& sample, const std::string& prev_answer,
                          const std::vector<PlanAction>& plan_actions,
                          const MemoryStore& memory_including_current, ModelBackend& backend,
                          const AgentConfig& config) {
    if (memory_including_current.empty())
        throw SequenceError("refine requires the current reflection in memory");
    auto ctx = detail::make_context(sample, config, backend, default_taxonomy());
    EpisodeState scratch;
    scratch.sample_id = sample.id;
    const auto& records = memory_including_current.records();
    return detail::do_refine(ctx, scratch, records.back().iteration, prev_answer, plan_actions,
                             records);
}

}  // namespace ocrloop
