#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qulint {

struct CompletionRequest {
    std::string model_id;
    std::vector<std::pair<std::string, std::string>> messages;  // (role, content)
    double temperature = 0.0;
    int max_output_tokens = 0;  // 0 = provider default
};

struct CompletionResponse {
    std::string text;
    std::optional<std::pair<long long, long long>> usage;  // (input, output) tokens
    std::chrono::milliseconds latency{0};
};

class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};

class RateLimited : public TransportError {
public:
    explicit RateLimited(int retry_after_seconds)
        : TransportError("rate limited, retry after " +
                         std::to_string(retry_after_seconds) + "s"),
          retry_after_seconds_(retry_after_seconds) {}

    int retry_after_seconds() const { return retry_after_seconds_; }

private:
    int retry_after_seconds_;
};

/// Provider-side context-window rejection; treated as an analysis skip, never
/// retried.
class TokenLimitError : public std::runtime_error {
public:
    explicit TokenLimitError(const std::string& what) : std::runtime_error(what) {}
};

class CassetteMiss : public std::runtime_error {
public:
    explicit CassetteMiss(const std::string& fingerprint)
        : std::runtime_error("no cassette entry for fingerprint " + fingerprint),
          fingerprint_(fingerprint) {}

    const std::string& fingerprint() const { return fingerprint_; }

private:
    std::string fingerprint_;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

/// Scripted backend for tests. The handler maps each request to a response
/// body (or throws); every request is recorded for assertions.
class MockBackend : public CompletionBackend {
public:
    using Handler = std::function<std::string(const CompletionRequest&)>;

    explicit MockBackend(Handler handler) : handler_(std::move(handler)) {}

    static MockBackend constant(std::string text) {
        return MockBackend([text = std::move(text)](const CompletionRequest&) {
            return text;
        });
    }

    CompletionResponse complete(const CompletionRequest& request) override {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            requests_.push_back(request);
        }
        CompletionResponse response;
        response.text = handler_(request);
        return response;
    }

    std::vector<CompletionRequest> requests() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return requests_;
    }

    std::size_t request_count() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return requests_.size();
    }

private:
    Handler handler_;
    mutable std::mutex mutex_;
    std::vector<CompletionRequest> requests_;
};

}  // namespace qulint
