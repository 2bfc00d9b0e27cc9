#pragma once

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <semaphore>
#include <string>
#include <thread>

#include "qulint/backend.hpp"

namespace qulint {

struct LiveBackendConfig {
    std::string endpoint = "https://api.openai.com";  // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "QULINT_LLM_API_KEY";
    int max_retries = 3;
    int backoff_base_ms = 250;
    int max_in_flight = 4;
    int timeout_seconds = 120;
    std::function<void(const std::string&)> logger;  // optional, never receives the credential
};

namespace detail {

class RetryableFailure : public std::runtime_error {
public:
    explicit RetryableFailure(const std::string& what) : std::runtime_error(what) {}
};

inline bool looks_like_token_limit(const std::string& body) {
    if (body.find("context_length_exceeded") != std::string::npos) return true;
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (!j.is_object() || !j.contains("error") || !j["error"].is_object()) return false;
    const std::string message = j["error"].value("message", "");
    return message.find("context length") != std::string::npos ||
           message.find("too many tokens") != std::string::npos;
}

}  // namespace detail

/// Live chat-completions client. Credential comes from the environment, is
/// sent only to the configured endpoint, and never reaches logs or errors.
class HttpBackend : public CompletionBackend {
public:
    explicit HttpBackend(LiveBackendConfig config)
        : config_(std::move(config)),
          in_flight_(std::max(1, config_.max_in_flight)) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        api_key_ = key ? key : "";
    }

    CompletionResponse complete(const CompletionRequest& request) override {
        in_flight_.acquire();
        struct Release {
            std::counting_semaphore<>& sem;
            ~Release() { sem.release(); }
        } release{in_flight_};

        std::string last_error = "no attempt made";
        int retry_after = 0;
        bool rate_limited = false;
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            if (attempt > 0) {
                int sleep_ms = config_.backoff_base_ms << (attempt - 1);
                if (retry_after > 0) sleep_ms = std::max(sleep_ms, retry_after * 1000);
                log("retrying request, attempt " + std::to_string(attempt + 1) + " of " +
                    std::to_string(config_.max_retries + 1));
                std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
            }
            try {
                return attempt_once(request);
            } catch (const RateLimited& e) {
                rate_limited = true;
                retry_after = e.retry_after_seconds();
                last_error = e.what();
                log(std::string("rate limited: ") + e.what());
            } catch (const detail::RetryableFailure& e) {
                rate_limited = false;
                retry_after = 0;
                last_error = e.what();
                log(std::string("transient failure: ") + e.what());
            }
        }
        if (rate_limited) throw RateLimited(retry_after);
        throw TransportError("request failed after " +
                             std::to_string(config_.max_retries + 1) +
                             " attempts: " + last_error);
    }

private:
    CompletionResponse attempt_once(const CompletionRequest& request) {
        nlohmann::json body{
            {"model", request.model_id},
            {"temperature", request.temperature},
            {"messages", nlohmann::json::array()},
        };
        for (const auto& [role, content] : request.messages) {
            body["messages"].push_back({{"role", role}, {"content", content}});
        }
        if (request.max_output_tokens > 0) body["max_tokens"] = request.max_output_tokens;

        httplib::Client client(config_.endpoint);
        client.set_connection_timeout(config_.timeout_seconds, 0);
        client.set_read_timeout(config_.timeout_seconds, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

        auto started = std::chrono::steady_clock::now();
        httplib::Result result = client.Post(config_.path, headers, body.dump(), "application/json");
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);

        if (!result) {
            throw detail::RetryableFailure("connection failed: " +
                                           httplib::to_string(result.error()));
        }
        const httplib::Response& http = *result;
        if (http.status == 429) {
            int after = 0;
            if (http.has_header("Retry-After")) {
                after = std::max(0, std::atoi(http.get_header_value("Retry-After").c_str()));
            }
            throw RateLimited(after);
        }
        if (http.status >= 500) {
            throw detail::RetryableFailure("server error: HTTP " + std::to_string(http.status));
        }
        if (http.status != 200) {
            if (detail::looks_like_token_limit(http.body)) {
                throw TokenLimitError("provider rejected request: context window exceeded");
            }
            throw TransportError("HTTP " + std::to_string(http.status) + ": " +
                                 http.body.substr(0, 200));
        }

        nlohmann::json j = nlohmann::json::parse(http.body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() ||
            j["choices"].empty() || !j["choices"][0].contains("message")) {
            throw TransportError("malformed provider response body");
        }
        CompletionResponse response;
        response.text = j["choices"][0]["message"].value("content", "");
        if (j.contains("usage") && j["usage"].is_object()) {
            response.usage = {j["usage"].value("prompt_tokens", 0LL),
                              j["usage"].value("completion_tokens", 0LL)};
        }
        response.latency = elapsed;
        return response;
    }

    void log(const std::string& message) const {
        if (config_.logger) config_.logger(message);
    }

    LiveBackendConfig config_;
    std::string api_key_;
    std::counting_semaphore<> in_flight_;
};

}  // namespace qulint
