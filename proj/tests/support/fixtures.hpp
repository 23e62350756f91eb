#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "ocrloop/agent.hpp"
#include "ocrloop/dataset.hpp"
#include "ocrloop/mock_backend.hpp"

// Shared scaffolding for agent/harness tests: a real (tiny) PNG on
// disk, quick Sample builders, and a mock scripted for a standard
// full-mode episode.
namespace fixtures {

inline const unsigned char kTinyPng[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
    0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00,
    0x00, 0x90, 0x77, 0x53, 0xde, 0x00, 0x00, 0x00, 0x0c, 0x49, 0x44, 0x41, 0x54, 0x78,
    0x9c, 0x63, 0x38, 0x21, 0x27, 0x07, 0x00, 0x02, 0xb6, 0x01, 0x05, 0x34, 0xa6, 0x75,
    0xaa, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82,
};

// Fresh directory under the system temp root; unique per call.
inline std::string temp_dir(const std::string& hint) {
    static std::mt19937_64 rng{std::random_device{}()};
    const auto base = std::filesystem::temp_directory_path() / "ocrloop-tests";
    std::filesystem::create_directories(base);
    const auto dir = base / (hint + "-" + std::to_string(rng()));
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline std::string write_tiny_png(const std::string& dir, const std::string& name = "img.png") {
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(kTinyPng), sizeof(kTinyPng));
    return path;
}

// A recognition sample backed by a real image file.
inline ocrloop::Sample text_sample(const std::string& id, const std::string& image_path,
                                   const std::string& gold = "NO PARKING") {
    ocrloop::Sample s;
    s.id = id;
    s.image_ref = image_path;
    s.question = "What does the sign say?";
    s.task_type = ocrloop::TaskType::Recognition;
    s.gold.answers = {gold};
    return s;
}

// Scripts a complete full-mode episode: initial plus T reflect/refine
// rounds. Reflections carry one feasible and one infeasible action so
// the filter path is always exercised.
inline void script_episode(ocrloop::ScriptedBackend& mock, const std::string& sample_id, int t,
                           const std::string& final_answer = "NO PARKING") {
    mock.script(sample_id, ocrloop::CallKind::Initial, 0, "ANSWER: NO PARK");
    for (int i = 1; i <= t; ++i) {
        mock.script(sample_id, ocrloop::CallKind::Reflect, i,
                    "Reflection for round " + std::to_string(i) + " of " + sample_id + ".\n" +
                        "STEP: re-read the sign text in round " + std::to_string(i) + "\n" +
                        "STEP: apply image enhancement");
        mock.script(sample_id, ocrloop::CallKind::Refine, i,
                    i == t ? "ANSWER: " + final_answer
                           : "ANSWER: NO PARKIN" + std::string(static_cast<std::size_t>(i), 'G'));
    }
}

inline ocrloop::AgentConfig config_for(ocrloop::AgentMode mode, int t) {
    ocrloop::AgentConfig config;
    config.mode = mode;
    config.max_iterations = t;
    return config;
}

}  // namespace fixtures
