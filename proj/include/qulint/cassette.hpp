#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>

#include "qulint/backend.hpp"
#include "qulint/textutil.hpp"

namespace qulint {

namespace detail {

inline void fnv1a_mix(std::uint64_t& hash, std::string_view bytes) {
    constexpr std::uint64_t kPrime = 1099511628211ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= kPrime;
    }
}

}  // namespace detail

/// Content-addressed request key: FNV-1a 64 over model, messages, and
/// temperature, hex-encoded. Replay looks entries up by this key only, never
/// by request order.
inline std::string request_fingerprint(const CompletionRequest& r) {
    std::uint64_t hash = 14695981039346656037ull;
    detail::fnv1a_mix(hash, r.model_id);
    detail::fnv1a_mix(hash, "\x1f");
    for (const auto& [role, content] : r.messages) {
        detail::fnv1a_mix(hash, role);
        detail::fnv1a_mix(hash, "\x1e");
        detail::fnv1a_mix(hash, content);
        detail::fnv1a_mix(hash, "\x1f");
    }
    detail::fnv1a_mix(hash, std::to_string(r.temperature));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

/// JSON-backed store of recorded completions, diff-friendly via nlohmann's
/// sorted object keys.
class Cassette {
public:
    Cassette() : doc_{{"version", 1}, {"entries", nlohmann::json::object()}} {}

    static Cassette load(const std::string& path) {
        Cassette c;
        c.doc_ = nlohmann::json::parse(read_file(path));
        if (!c.doc_.contains("entries") || !c.doc_["entries"].is_object()) {
            throw std::runtime_error("not a cassette file: " + path);
        }
        return c;
    }

    void save(const std::string& path) const {
        write_file(path, doc_.dump(2) + "\n");
    }

    bool contains(const std::string& fingerprint) const {
        return doc_["entries"].contains(fingerprint);
    }

    std::string response_text(const std::string& fingerprint) const {
        const nlohmann::json& entries = doc_["entries"];
        if (!entries.contains(fingerprint)) throw CassetteMiss(fingerprint);
        return entries[fingerprint]["response"]["text"].get<std::string>();
    }

    void put(const CompletionRequest& request, const CompletionResponse& response) {
        nlohmann::json summary{
            {"model", request.model_id},
            {"temperature", request.temperature},
            {"message_count", request.messages.size()},
        };
        if (!request.messages.empty()) {
            const auto& [role, content] = request.messages.front();
            summary["first_role"] = role;
            summary["prompt_chars"] = content.size();
            summary["prompt_head"] = content.substr(0, 80);
        }
        doc_["entries"][request_fingerprint(request)] = {
            {"request", summary},
            {"response", {{"text", response.text}}},
        };
    }

    std::size_t size() const { return doc_["entries"].size(); }

private:
    nlohmann::json doc_;
};

/// Deterministic playback of a recorded cassette; unknown requests raise
/// CassetteMiss.
class ReplayBackend : public CompletionBackend {
public:
    explicit ReplayBackend(Cassette cassette) : cassette_(std::move(cassette)) {}

    static ReplayBackend from_file(const std::string& path) {
        return ReplayBackend(Cassette::load(path));
    }

    CompletionResponse complete(const CompletionRequest& request) override {
        CompletionResponse response;
        response.text = cassette_.response_text(request_fingerprint(request));
        return response;
    }

private:
    Cassette cassette_;
};

/// Write-through wrapper: forwards to the inner backend and records every
/// response. The cassette is flushed on save().
class RecordingBackend : public CompletionBackend {
public:
    RecordingBackend(std::shared_ptr<CompletionBackend> inner, std::string path)
        : inner_(std::move(inner)), path_(std::move(path)) {}

    CompletionResponse complete(const CompletionRequest& request) override {
        CompletionResponse response = inner_->complete(request);
        std::lock_guard<std::mutex> lock(mutex_);
        cassette_.put(request, response);
        return response;
    }

    void save() const {
        std::lock_guard<std::mutex> lock(mutex_);
        cassette_.save(path_);
    }

    const Cassette& cassette() const { return cassette_; }

private:
    std::shared_ptr<CompletionBackend> inner_;
    std::string path_;
    mutable std::mutex mutex_;
    Cassette cassette_;
};

}  // namespace qulint
