#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "ocrloop/http_backend.hpp"
#include "support/fixtures.hpp"

using namespace ocrloop;

namespace {

// Local stub endpoint with a scripted status sequence.
class StubServer {
  public:
    explicit StubServer(std::vector<int> statuses) : statuses_(std::move(statuses)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            const std::size_t n = calls_.fetch_add(1);
            last_body_ = req.body;
            const int status = n < statuses_.size() ? statuses_[n] : statuses_.back();
            res.status = status;
            if (status == 200) {
                res.set_content(
                    nlohmann::json{
                        {"choices",
                         {{{"message", {{"role", "assistant"}, {"content", "hello world"}}}}}}}
                        .dump(),
                    "application/json");
            } else {
                res.set_content("{}", "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this]() { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int calls() const { return static_cast<int>(calls_.load()); }
    const std::string& last_body() const { return last_body_; }

  private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<std::size_t> calls_{0};
    std::vector<int> statuses_;
    std::string last_body_;
};

ModelRequest sample_request() {
    ModelRequest req;
    req.image.media_type = "image/png";
    req.image.data = std::string(reinterpret_cast<const char*>(fixtures::kTinyPng),
                                 sizeof(fixtures::kTinyPng));
    req.messages = {{Role::System, "be careful"}, {Role::User, "what does the sign say?"}};
    req.tag = {"s1", CallKind::Initial, 0};
    return req;
}

HttpBackendConfig fast_config(const std::string& base_url) {
    HttpBackendConfig config;
    config.base_url = base_url;
    config.backoff_base_seconds = 0.001;
    config.backoff_cap_seconds = 0.002;
    return config;
}

}  // namespace

TEST_CASE("http backend: 500 twice then 200 succeeds after 2 retries", "[http]") {
    StubServer server({500, 500, 200});
    HttpBackend backend(fast_config(server.base_url()));
    CHECK(backend.generate(sample_request()) == "hello world");
    CHECK(server.calls() == 3);
    CHECK(backend.last_call_stats().retries == 2);
    CHECK(backend.last_call_stats().http_status == 200);
}

TEST_CASE("http backend: non-retryable 4xx fails immediately", "[http]") {
    StubServer server({400});
    HttpBackend backend(fast_config(server.base_url()));
    try {
        backend.generate(sample_request());
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.http_status == 400);
        CHECK(e.retries == 0);
    }
    CHECK(server.calls() == 1);
}

TEST_CASE("http backend: retry budget exhausts on persistent 503", "[http]") {
    StubServer server({503});
    auto config = fast_config(server.base_url());
    config.max_retries = 2;
    HttpBackend backend(config);
    try {
        backend.generate(sample_request());
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.http_status == 503);
        CHECK(e.retries == 2);
    }
    CHECK(server.calls() == 3);  // initial attempt plus two retries
}

TEST_CASE("http backend: invalid request rejected before any network call", "[http]") {
    StubServer server({200});
    HttpBackend backend(fast_config(server.base_url()));
    ModelRequest req = sample_request();
    req.messages.clear();
    CHECK_THROWS_AS(backend.generate(req), BackendError);
    CHECK(server.calls() == 0);
}

TEST_CASE("http backend: request body carries the image as a data URL part", "[http]") {
    StubServer server({200});
    HttpBackend backend(fast_config(server.base_url()));
    backend.generate(sample_request());

    const nlohmann::json body = nlohmann::json::parse(server.last_body());
    CHECK(body.at("model").get<std::string>() == "rolmocr");
    REQUIRE(body.at("messages").size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][0]["content"].is_string());

    const auto& user = body["messages"][1];
    CHECK(user["role"] == "user");
    REQUIRE(user["content"].is_array());
    REQUIRE(user["content"].size() == 2);
    CHECK(user["content"][0]["type"] == "image_url");
    const std::string url = user["content"][0]["image_url"]["url"].get<std::string>();
    CHECK(url.rfind("data:image/png;base64,", 0) == 0);
    CHECK(user["content"][1]["type"] == "text");
    CHECK(user["content"][1]["text"].get<std::string>() == "what does the sign say?");
}

TEST_CASE("http backend: malformed completion body is an error", "[http]") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        res.status = 200;
        res.set_content("{\"not\": \"a completion\"}", "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&server]() { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpBackend backend(fast_config("http://127.0.0.1:" + std::to_string(port)));
    CHECK_THROWS_AS(backend.generate(sample_request()), BackendError);

    server.stop();
    thread.join();
}
