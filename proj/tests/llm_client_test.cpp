#include "qulint/cassette.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdio>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "qulint/backend.hpp"
#include "qulint/textutil.hpp"

namespace qulint {
namespace {

CompletionRequest make_request(const std::string& content, const std::string& model = "m") {
    CompletionRequest r;
    r.model_id = model;
    r.messages = {{"user", content}};
    r.temperature = 0.0;
    return r;
}

std::string temp_path(const std::string& name) {
    return testing::TempDir() + name;
}

TEST(MockBackend, ConstantResponseAndRequestRecording) {
    MockBackend mock = MockBackend::constant("hello back");
    CompletionResponse r1 = mock.complete(make_request("one"));
    CompletionResponse r2 = mock.complete(make_request("two"));
    EXPECT_EQ(r1.text, "hello back");
    EXPECT_EQ(r2.text, "hello back");
    ASSERT_EQ(mock.request_count(), 2u);
    EXPECT_EQ(mock.requests()[0].messages[0].second, "one");
    EXPECT_EQ(mock.requests()[1].messages[0].second, "two");
    EXPECT_EQ(mock.requests()[0].model_id, "m");
}

TEST(Fingerprint, FrozenReferenceValue) {
    EXPECT_EQ(request_fingerprint(make_request("hello")), "9e642d7280ee84ef");
    EXPECT_EQ(request_fingerprint(make_request("hello!")), "f43cbf76f984faba");
}

TEST(Fingerprint, SensitiveToEveryComponent) {
    const std::string base = request_fingerprint(make_request("hello"));
    EXPECT_EQ(request_fingerprint(make_request("hello")), base);

    EXPECT_NE(request_fingerprint(make_request("hello", "other-model")), base);
    EXPECT_NE(request_fingerprint(make_request("hellx")), base);

    CompletionRequest role_change = make_request("hello");
    role_change.messages[0].first = "system";
    EXPECT_NE(request_fingerprint(role_change), base);

    CompletionRequest temp_change = make_request("hello");
    temp_change.temperature = 0.5;
    EXPECT_NE(request_fingerprint(temp_change), base);

    CompletionRequest extra_message = make_request("hello");
    extra_message.messages.emplace_back("user", "more");
    EXPECT_NE(request_fingerprint(extra_message), base);
}

TEST(Cassette, RecordThenReplayRoundTrip) {
    auto inner = std::make_shared<MockBackend>([](const CompletionRequest& r) {
        return "echo: " + r.messages[0].second;
    });
    const std::string path = temp_path("roundtrip.cassette.json");
    RecordingBackend recorder(inner, path);
    EXPECT_EQ(recorder.complete(make_request("alpha")).text, "echo: alpha");
    EXPECT_EQ(recorder.complete(make_request("beta")).text, "echo: beta");
    recorder.save();
    EXPECT_EQ(recorder.cassette().size(), 2u);

    ReplayBackend replay = ReplayBackend::from_file(path);
    EXPECT_EQ(replay.complete(make_request("beta")).text, "echo: beta");
    EXPECT_EQ(replay.complete(make_request("alpha")).text, "echo: alpha");
    EXPECT_EQ(replay.complete(make_request("alpha")).text, "echo: alpha");
    std::remove(path.c_str());
}

TEST(Cassette, ReRecordOverwritesEntry) {
    int calls = 0;
    auto inner = std::make_shared<MockBackend>([&calls](const CompletionRequest&) {
        return "version " + std::to_string(++calls);
    });
    const std::string path = temp_path("rerecord.cassette.json");
    RecordingBackend recorder(inner, path);
    EXPECT_EQ(recorder.complete(make_request("same")).text, "version 1");
    EXPECT_EQ(recorder.complete(make_request("same")).text, "version 2");
    EXPECT_EQ(recorder.cassette().size(), 1u);
    recorder.save();

    ReplayBackend replay = ReplayBackend::from_file(path);
    EXPECT_EQ(replay.complete(make_request("same")).text, "version 2");
    std::remove(path.c_str());
}

TEST(Cassette, MissingFingerprintThrowsCassetteMiss) {
    ReplayBackend replay{Cassette{}};
    const CompletionRequest request = make_request("never recorded");
    try {
        replay.complete(request);
        FAIL() << "expected CassetteMiss";
    } catch (const CassetteMiss& e) {
        EXPECT_EQ(e.fingerprint(), request_fingerprint(request));
    }
}

TEST(Cassette, SavedFileIsStableAcrossRoundTrips) {
    auto inner = std::make_shared<MockBackend>(
        [](const CompletionRequest&) { return std::string("fixed"); });
    const std::string path1 = temp_path("stable1.cassette.json");
    const std::string path2 = temp_path("stable2.cassette.json");
    RecordingBackend recorder(inner, path1);
    recorder.complete(make_request("zebra"));
    recorder.complete(make_request("apple"));
    recorder.save();

    Cassette loaded = Cassette::load(path1);
    loaded.save(path2);
    EXPECT_EQ(read_file(path1), read_file(path2));

    nlohmann::json doc = nlohmann::json::parse(read_file(path1));
    EXPECT_EQ(doc["version"], 1);
    EXPECT_EQ(doc["entries"].size(), 2u);
    for (const auto& [fp, entry] : doc["entries"].items()) {
        EXPECT_EQ(fp.size(), 16u);
        EXPECT_TRUE(entry.contains("request"));
        EXPECT_EQ(entry["response"]["text"], "fixed");
    }
    std::remove(path1.c_str());
    std::remove(path2.c_str());
}

TEST(Cassette, LoadRejectsNonCassetteJson) {
    const std::string path = temp_path("notacassette.json");
    write_file(path, "{\"something\": 3}\n");
    EXPECT_THROW(Cassette::load(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST(Cassette, ConcurrentReplayIsDeterministic) {
    Cassette cassette;
    std::vector<CompletionRequest> requests;
    for (int i = 0; i < 16; ++i) {
        requests.push_back(make_request("prompt " + std::to_string(i)));
        CompletionResponse response;
        response.text = "reply " + std::to_string(i);
        cassette.put(requests.back(), response);
    }
    ReplayBackend replay{std::move(cassette)};

    std::atomic<int> mismatches{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (int round = 0; round < 50; ++round) {
                for (int i = 0; i < 16; ++i) {
                    if (replay.complete(requests[i]).text != "reply " + std::to_string(i)) {
                        ++mismatches;
                    }
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(mismatches.load(), 0);
}

TEST(Cassette, ConcurrentRecordingKeepsAllEntries) {
    auto inner = std::make_shared<MockBackend>([](const CompletionRequest& r) {
        return "echo: " + r.messages[0].second;
    });
    const std::string path = temp_path("concurrent.cassette.json");
    RecordingBackend recorder(inner, path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&recorder, t] {
            for (int i = 0; i < 10; ++i) {
                recorder.complete(make_request("t" + std::to_string(t) + "i" + std::to_string(i)));
            }
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(recorder.cassette().size(), 80u);
    std::remove(path.c_str());
}

}  // namespace
}  // namespace qulint
