#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ocrloop/errors.hpp"
#include "ocrloop/text_norm.hpp"

namespace ocrloop {

enum class Role { System, User };

inline std::string to_string(Role r) { return r == Role::System ? "system" : "user"; }

struct Message {
    Role role = Role::User;
    std::string text;
};

struct GenerationParams {
    double temperature = 0.0;
    int max_tokens = 1024;
    std::optional<std::uint64_t> seed;
};

// Raw image bytes plus their sniffed media type ("image/png" etc).
struct ImagePayload {
    std::string media_type;
    std::string data;
};

enum class CallKind { Initial, Reflect, Refine };

inline std::string to_string(CallKind k) {
    switch (k) {
        case CallKind::Initial: return "initial";
        case CallKind::Reflect: return "reflect";
        default: return "refine";
    }
}

inline std::optional<CallKind> parse_call_kind(std::string_view s) {
    if (s == "initial") return CallKind::Initial;
    if (s == "reflect") return CallKind::Reflect;
    if (s == "refine") return CallKind::Refine;
    return std::nullopt;
}

// Identifies where in an episode a call sits; iteration is 0 for the
// initial pass, 1..T for the loop rounds.
struct CallTag {
    std::string sample_id;
    CallKind kind = CallKind::Initial;
    int iteration = 0;
};

struct ModelRequest {
    ImagePayload image;
    std::vector<Message> messages;
    GenerationParams params;
    CallTag tag;
};

// Rejects malformed requests before any transport work happens.
inline void validate_request(const ModelRequest& req) {
    if (req.messages.empty()) throw BackendError("request has no messages");
    if (req.image.data.empty()) throw BackendError("request has no image payload");
    if (req.image.media_type.empty()) throw BackendError("request image has no media type");
    for (const auto& m : req.messages)
        if (m.text.empty()) throw BackendError("request contains an empty message");
}

// Stable digest of everything the model sees. Used for trace entries
// and cross-process determinism checks, so it must not depend on
// addresses or iteration timing.
inline std::string request_digest(const ModelRequest& req) {
    std::uint64_t h = fnv1a(req.image.media_type);
    h = fnv1a(req.image.data, h);
    for (const auto& m : req.messages) {
        h = fnv1a(to_string(m.role), h);
        h = fnv1a(m.text, h);
    }
    h = fnv1a(std::to_string(req.params.temperature), h);
    h = fnv1a(std::to_string(req.params.max_tokens), h);
    if (req.params.seed) h = fnv1a(std::to_string(*req.params.seed), h);
    return hex64(h);
}

class ModelBackend {
  public:
    virtual ~ModelBackend() = default;

    // Returns the model's text for one request. Implementations must
    // call validate_request first and may throw BackendError.
    virtual std::string generate(const ModelRequest& request) = 0;
};

}  // namespace ocrloop
