#pragma once

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "ocrloop/backend.hpp"
#include "ocrloop/errors.hpp"

namespace ocrloop {

// Key a scripted response hangs off: which sample, which call in the
// loop, which round.
struct FixtureKey {
    std::string sample_id;
    CallKind kind = CallKind::Initial;
    int iteration = 0;

    bool operator<(const FixtureKey& o) const {
        return std::tie(sample_id, kind, iteration) < std::tie(o.sample_id, o.kind, o.iteration);
    }
};

// Everything the mock saw for one generate call, kept for prompt
// inspection in tests.
struct CapturedRequest {
    CallTag tag;
    std::vector<Message> messages;
    GenerationParams params;
    std::string image_media_type;
    std::size_t image_bytes = 0;
    std::string digest;

    // all message texts joined, for substring assertions
    std::string prompt_text() const {
        std::string out;
        for (const auto& m : messages) {
            if (!out.empty()) out += '\n';
            out += m.text;
        }
        return out;
    }
};

// Deterministic stand-in for the real model: responses come from a
// scripted table keyed by (sample, call kind, iteration). Shareable
// across worker threads; the capture log stays ordered per sample.
class ScriptedBackend final : public ModelBackend {
  public:
    void script(std::string sample_id, CallKind kind, int iteration, std::string response) {
        std::lock_guard<std::mutex> lock(mu_);
        fixtures_[FixtureKey{std::move(sample_id), kind, iteration}] = std::move(response);
    }

    std::string generate(const ModelRequest& request) override {
        validate_request(request);
        const std::string digest = request_digest(request);

        std::lock_guard<std::mutex> lock(mu_);
        captured_.push_back(CapturedRequest{request.tag, request.messages, request.params,
                                            request.image.media_type, request.image.data.size(),
                                            digest});
        const FixtureKey key{request.tag.sample_id, request.tag.kind, request.tag.iteration};
        const auto it = fixtures_.find(key);
        if (it == fixtures_.end())
            throw FixtureMissError("no fixture for sample '" + key.sample_id + "' " +
                                   to_string(key.kind) + "@" + std::to_string(key.iteration));
        return it->second;
    }

    std::vector<CapturedRequest> captured() const {
        std::lock_guard<std::mutex> lock(mu_);
        return captured_;
    }

    std::vector<CapturedRequest> captured_for(const std::string& sample_id) const {
        std::lock_guard<std::mutex> lock(mu_);
        std::vector<CapturedRequest> out;
        for (const auto& c : captured_)
            if (c.tag.sample_id == sample_id) out.push_back(c);
        return out;
    }

    void clear_captures() {
        std::lock_guard<std::mutex> lock(mu_);
        captured_.clear();
    }

  private:
    mutable std::mutex mu_;
    std::map<FixtureKey, std::string> fixtures_;
    std::vector<CapturedRequest> captured_;
};

}  // namespace ocrloop
