#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <semaphore>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "ocrloop/backend.hpp"
#include "ocrloop/errors.hpp"
#include "ocrloop/image.hpp"

namespace ocrloop {

struct HttpBackendConfig {
    std::string base_url = "http://127.0.0.1:8000";
    std::string path = "/v1/chat/completions";
    std::string model = "rolmocr";
    std::string api_key;  // sent as a bearer token when nonempty
    int timeout_seconds = 120;
    int max_retries = 3;
    int max_in_flight = 4;
    double backoff_base_seconds = 0.5;
    double backoff_cap_seconds = 8.0;
};

struct HttpCallStats {
    int retries = 0;
    int http_status = 0;
    long long elapsed_ms = 0;
};

// Client for OpenAI-compatible vision chat endpoints. The image rides
// on the first user message as a base64 data URL content part; system
// and any later messages stay plain text. Timeouts, 429 and 5xx are
// retried with capped, jittered exponential backoff; other 4xx and
// malformed bodies fail immediately.
class HttpBackend final : public ModelBackend {
  public:
    explicit HttpBackend(HttpBackendConfig config)
        : config_(std::move(config)),
          in_flight_(std::max(1, config_.max_in_flight)) {}

    std::string generate(const ModelRequest& request) override {
        validate_request(request);
        const std::string body = build_body(request);

        in_flight_.acquire();
        struct Release {
            std::counting_semaphore<>& sem;
            ~Release() { sem.release(); }
        } release{in_flight_};

        const auto started = std::chrono::steady_clock::now();
        HttpCallStats stats;
        for (int attempt = 0;; ++attempt) {
            httplib::Client cli(config_.base_url);
            cli.set_connection_timeout(config_.timeout_seconds, 0);
            cli.set_read_timeout(config_.timeout_seconds, 0);
            cli.set_write_timeout(config_.timeout_seconds, 0);
            if (!config_.api_key.empty()) cli.set_bearer_token_auth(config_.api_key);

            auto res = cli.Post(config_.path, body, "application/json");
            const int status = res ? res->status : 0;
            stats.http_status = status;

            if (res && status == 200) {
                stats.elapsed_ms = elapsed_ms(started);
                record(stats);
                return parse_completion(res->body, stats);
            }

            const bool retryable = !res || status == 429 || (status >= 500 && status < 600);
            if (!retryable) {
                stats.elapsed_ms = elapsed_ms(started);
                record(stats);
                throw BackendError("backend returned HTTP " + std::to_string(status), status,
                                   stats.retries);
            }
            if (attempt >= config_.max_retries) {
                stats.elapsed_ms = elapsed_ms(started);
                record(stats);
                throw BackendError(res ? "backend failed with HTTP " + std::to_string(status) +
                                             " after retries"
                                       : "backend unreachable after retries",
                                   status, stats.retries);
            }
            stats.retries = attempt + 1;
            std::this_thread::sleep_for(backoff_delay(attempt));
        }
    }

    // diagnostics for the most recent call on any thread
    HttpCallStats last_call_stats() const {
        std::lock_guard<std::mutex> lock(stats_mu_);
        return last_stats_;
    }

  private:
    static long long elapsed_ms(std::chrono::steady_clock::time_point start) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }

    std::string build_body(const ModelRequest& req) const {
        nlohmann::json messages = nlohmann::json::array();
        bool image_attached = false;
        for (const auto& m : req.messages) {
            if (m.role == Role::User && !image_attached) {
                const std::string url = "data:" + req.image.media_type + ";base64," +
                                        base64_encode(req.image.data);
                messages.push_back(
                    {{"role", "user"},
                     {"content",
                      {{{"type", "image_url"}, {"image_url", {{"url", url}}}},
                       {{"type", "text"}, {"text", m.text}}}}});
                image_attached = true;
            } else {
                messages.push_back({{"role", to_string(m.role)}, {"content", m.text}});
            }
        }
        nlohmann::json body{{"model", config_.model},
                            {"messages", std::move(messages)},
                            {"temperature", req.params.temperature},
                            {"max_tokens", req.params.max_tokens}};
        if (req.params.seed) body["seed"] = *req.params.seed;
        return body.dump();
    }

    std::string parse_completion(const std::string& body, const HttpCallStats& stats) const {
        nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || !parsed["choices"].is_array() ||
            parsed["choices"].empty())
            throw BackendError("malformed completion body", 200, stats.retries);
        const auto& msg = parsed["choices"][0];
        if (!msg.contains("message") || !msg["message"].contains("content") ||
            !msg["message"]["content"].is_string())
            throw BackendError("completion body missing message content", 200, stats.retries);
        std::string text = msg["message"]["content"].get<std::string>();
        if (text.empty()) throw BackendError("model returned an empty completion", 200, stats.retries);
        return text;
    }

    std::chrono::milliseconds backoff_delay(int attempt) const {
        const double capped = std::min(config_.backoff_cap_seconds,
                                       config_.backoff_base_seconds * std::pow(2.0, attempt));
        thread_local std::mt19937 rng{std::random_device{}()};
        std::uniform_real_distribution<double> jitter(0.5, 1.0);
        return std::chrono::milliseconds(
            static_cast<long long>(capped * jitter(rng) * 1000.0));
    }

    void record(const HttpCallStats& stats) const {
        std::lock_guard<std::mutex> lock(stats_mu_);
        last_stats_ = stats;
    }

    HttpBackendConfig config_;
    std::counting_semaphore<> in_flight_;
    mutable std::mutex stats_mu_;
    mutable HttpCallStats last_stats_;
};

}  // namespace ocrloop
