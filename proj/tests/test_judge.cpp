#include "tovo/judge.hpp"

#include "tovo/errors.hpp"
#include "tovo/rng.hpp"
#include "mock_http.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace tovo;

namespace {

Sample make_sample() {
    Sample s;
    s.id = "sample-1";
    s.conversation.id = "sample-1";
    s.conversation.turns = {{Role::user, "tell me about the weather"},
                            {Role::assistant, "it is sunny"}};
    s.conversation.origin = Origin::single_turn;
    s.response = "it is sunny";
    s.responder_id = "fixture";
    return s;
}

MetricAssignment assignment_of(std::vector<std::string> ids) {
    MetricAssignment a;
    a.sample_id = "sample-1";
    a.metric_ids = std::move(ids);
    a.rng_seed = 1;
    return a;
}

/// Scripted backend: fails `failures` times, then returns `reply`.
class FlakyBackend : public ChatBackend {
public:
    FlakyBackend(int failures, std::string reply)
        : failures_(failures), reply_(std::move(reply)) {}

    int calls = 0;

    std::string complete(const ChatRequest&) override {
        ++calls;
        if (calls <= failures_) throw Error::io("scripted transport failure");
        return reply_;
    }

private:
    int failures_;
    std::string reply_;
};

}  // namespace

TEST_CASE("render_prompt substitutes each placeholder once in assignment order") {
    const Registry reg = builtin_registry();
    const Sample sample = make_sample();
    const PromptTemplate tmpl = builtin_template("reasoning-v1");

    SUBCASE("single metric includes its definition once and asks for rationale") {
        const std::string prompt = render_prompt(sample, assignment_of({"hate"}), reg, tmpl);
        const std::string& definition = reg.at("hate").definition;
        auto first = prompt.find(definition);
        REQUIRE(first != std::string::npos);
        CHECK(prompt.find(definition, first + 1) == std::string::npos);
        CHECK(prompt.find("rationale") != std::string::npos);
        CHECK(prompt.find("{metrics_block}") == std::string::npos);
    }

    SUBCASE("identical inputs render identical bytes") {
        const auto a = render_prompt(sample, assignment_of({"hate", "insult"}), reg, tmpl);
        const auto b = render_prompt(sample, assignment_of({"hate", "insult"}), reg, tmpl);
        CHECK(a == b);
    }

    SUBCASE("six metrics produce six block lines in order") {
        const std::vector<std::string> ids = {"hate",   "insult",  "threat",
                                              "privacy", "toxicity", "sexual"};
        const std::string prompt = render_prompt(sample, assignment_of(ids), reg, tmpl);
        std::vector<std::size_t> positions;
        for (const auto& id : ids) {
            const auto pos = prompt.find(id + ": ");
            REQUIRE(pos != std::string::npos);
            positions.push_back(pos);
        }
        for (std::size_t i = 1; i < positions.size(); ++i) CHECK(positions[i - 1] < positions[i]);
    }

    SUBCASE("unknown metric id") {
        CHECK_THROWS_CODE(render_prompt(sample, assignment_of({"no-such-metric"}), reg, tmpl),
                          ErrorCode::unknown_metric);
    }

    SUBCASE("no definition leakage across assignments") {
        const std::string prompt = render_prompt(sample, assignment_of({"hate"}), reg, tmpl);
        for (const auto& metric : reg.metrics()) {
            if (metric.id == "hate") continue;
            CHECK(prompt.find(metric.definition) == std::string::npos);
        }
    }

    SUBCASE("label-only template omits the rationale field") {
        const PromptTemplate lo = builtin_template("label-only-v1");
        const std::string prompt = render_prompt(sample, assignment_of({"hate"}), reg, lo);
        CHECK(prompt.find("metric_id | label | rationale") == std::string::npos);
        CHECK(prompt.find("metric_id | label") != std::string::npos);
    }
}

TEST_CASE("template validation requires each placeholder exactly once") {
    PromptTemplate tmpl;
    tmpl.template_id = "bad";
    tmpl.body = "only {conversation} and {response}";
    CHECK_THROWS_CODE(tmpl.validate(), ErrorCode::invalid_config);
    tmpl.body = "{conversation} {response} {metrics_block} {metrics_block}";
    CHECK_THROWS_CODE(tmpl.validate(), ErrorCode::invalid_config);
    tmpl.body = "{conversation} {response} {metrics_block}";
    CHECK_NOTHROW(tmpl.validate());
}

TEST_CASE("parse_verdict fixture corpus classifies exactly as documented") {
    std::ifstream in(tovo::test::fixtures_dir() + "/parse_corpus.jsonl");
    REQUIRE(in.good());
    std::string line;
    std::size_t cases = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++cases;
        const json j = json::parse(line);
        CAPTURE(j.at("name").get<std::string>());
        const auto expected_metrics = j.at("expected_metrics").get<std::vector<std::string>>();

        JudgeVerdict verdict;
        REQUIRE_NOTHROW(verdict = parse_verdict(j.at("raw").get<std::string>(), expected_metrics));
        CHECK(verdict.status == parse_verdict_status(j.at("expect_status").get<std::string>()));
        CHECK(verdict.raw_output == j.at("raw").get<std::string>());

        if (verdict.status == VerdictStatus::ok) {
            const auto expect_labels = j.at("expect_labels").get<std::map<std::string, int>>();
            CHECK(verdict.labels == expect_labels);
            std::set<std::string> expected_set(expected_metrics.begin(), expected_metrics.end());
            std::set<std::string> got_set;
            for (const auto& [k, v] : verdict.labels) got_set.insert(k);
            CHECK(got_set == expected_set);
            if (j.contains("expect_rationales")) {
                for (const auto& [metric, text] :
                     j.at("expect_rationales").get<std::map<std::string, std::string>>()) {
                    CHECK(verdict.rationales.at(metric) == text);
                }
            }
        }
    }
    CHECK(cases >= 30);
}

TEST_CASE("parse_verdict inverts format_verdict on valid verdicts") {
    const std::vector<std::string> pool = {"hate", "insult", "threat", "privacy", "toxicity",
                                           "spam", "self-harm"};
    SeededRng rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng.bounded(pool.size());
        std::vector<std::string> ids;
        for (std::size_t idx : rng.sample_indices(k, pool.size())) ids.push_back(pool[idx]);

        std::map<std::string, int> labels;
        std::map<std::string, std::string> rationales;
        for (const auto& id : ids) {
            labels[id] = static_cast<int>(rng.bounded(2));
            rationales[id] = "reason " + std::to_string(rng.bounded(1000)) + " for " + id;
        }
        const std::string raw = format_verdict(ids, labels, rationales);
        const JudgeVerdict verdict = parse_verdict(raw, ids);
        REQUIRE(verdict.status == VerdictStatus::ok);
        CHECK(verdict.labels == labels);
        CHECK(verdict.rationales == rationales);
    }
}

TEST_CASE("format_verdict escapes the field delimiter in rationales") {
    const std::string raw = format_verdict({"hate"}, {{"hate", 1}}, {{"hate", "a|b|c"}});
    CHECK(raw == "hate | 1 | a/b/c");
}

TEST_CASE("parse_verdict never throws on arbitrary byte soup") {
    SeededRng rng(0xfeed);
    const std::vector<std::string> expected = {"hate", "toxicity"};
    for (int trial = 0; trial < 500; ++trial) {
        std::string soup;
        const std::size_t len = rng.bounded(400);
        for (std::size_t i = 0; i < len; ++i) {
            soup.push_back(static_cast<char>(rng.bounded(256)));
        }
        JudgeVerdict verdict;
        REQUIRE_NOTHROW(verdict = parse_verdict(soup, expected));
        if (verdict.status == VerdictStatus::ok) {
            CHECK(verdict.labels.size() == expected.size());
        } else {
            CHECK(verdict.raw_output == soup);
        }
    }
}

TEST_CASE("query_judge retries transport failures within the budget") {
    JudgeProfile profile;
    profile.judge_id = "j1";
    profile.model_name = "m";
    profile.endpoint = "mock://x";

    SUBCASE("healthy backend answers on the first attempt") {
        profile.max_retries = 2;
        FlakyBackend backend(0, "hate | 1 | r");
        CHECK(query_judge(profile, "p", backend) == "hate | 1 | r");
        CHECK(backend.calls == 1);
    }

    SUBCASE("two failures then success with max_retries=2") {
        profile.max_retries = 2;
        FlakyBackend backend(2, "hate | 1 | r");
        CHECK(query_judge(profile, "p", backend) == "hate | 1 | r");
        CHECK(backend.calls == 3);
    }

    SUBCASE("exhaustion raises BackendFailed") {
        profile.max_retries = 1;
        FlakyBackend backend(99, "never");
        CHECK_THROWS_CODE(query_judge(profile, "p", backend), ErrorCode::backend_failed);
        CHECK(backend.calls == 2);
    }
}

TEST_CASE("http backend speaks the chat-completions wire shape") {
    tovo::test::TestHttpServer server;
    json seen_request;
    server.raw().Post("/v1/chat/completions", [&](const httplib::Request& req,
                                                  httplib::Response& res) {
        seen_request = json::parse(req.body);
        const json reply{
            {"choices", json::array({json{{"message", json{{"role", "assistant"},
                                                           {"content", "hate | 0 | fine"}}}}})}};
        res.set_content(reply.dump(), "application/json");
    });
    server.start();

    HttpChatBackend backend(server.url("/v1/chat/completions"), std::chrono::milliseconds(5000));
    ChatRequest request;
    request.model = "test-model";
    request.messages = {{"user", "classify this"}};
    request.temperature = 0.0;

    CHECK(backend.complete(request) == "hate | 0 | fine");
    CHECK(seen_request.at("model") == "test-model");
    CHECK(seen_request.at("temperature") == 0.0);
    REQUIRE(seen_request.at("messages").size() == 1);
    CHECK(seen_request["messages"][0].at("role") == "user");
    CHECK(seen_request["messages"][0].at("content") == "classify this");
}

TEST_CASE("http backend surfaces status and payload errors") {
    tovo::test::TestHttpServer server;
    std::atomic<int> hits{0};
    server.raw().Post("/bad", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
        res.set_content("boom", "text/plain");
    });
    server.raw().Post("/malformed", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"nope\": true}", "application/json");
    });
    server.start();

    ChatRequest request;
    request.model = "m";
    request.messages = {{"user", "x"}};

    HttpChatBackend bad(server.url("/bad"), std::chrono::milliseconds(5000));
    CHECK_THROWS_CODE(bad.complete(request), ErrorCode::io_error);

    HttpChatBackend malformed(server.url("/malformed"), std::chrono::milliseconds(5000));
    CHECK_THROWS_CODE(malformed.complete(request), ErrorCode::io_error);

    JudgeProfile profile;
    profile.judge_id = "j-bad";
    profile.model_name = "m";
    profile.endpoint = server.url("/bad");
    profile.max_retries = 2;
    hits = 0;
    CHECK_THROWS_CODE(query_judge(profile, "p", bad), ErrorCode::backend_failed);
    CHECK(hits == 3);  // initial attempt plus two retries
}

TEST_CASE("mock backend emits a parseable deterministic verdict") {
    const Registry reg = builtin_registry();
    const Sample sample = make_sample();
    const auto assignment = assignment_of({"hate", "toxicity", "threat"});
    const std::string prompt =
        render_prompt(sample, assignment, reg, builtin_template("reasoning-v1"));

    MockChatBackend backend;
    ChatRequest request;
    request.model = "mock-model";
    request.messages = {{"user", prompt}};
    const std::string raw_a = backend.complete(request);
    const std::string raw_b = backend.complete(request);
    CHECK(raw_a == raw_b);

    const JudgeVerdict verdict = parse_verdict(raw_a, assignment.metric_ids);
    CHECK(verdict.status == VerdictStatus::ok);
    for (const auto& [metric, rationale] : verdict.rationales) CHECK_FALSE(rationale.empty());

    request.model = "other-model";
    CHECK(backend.complete(request) != raw_a);  // labels depend on the model identity
}

TEST_CASE("collect_verdict retries parse failures and merges per-metric rounds") {
    const Registry reg = builtin_registry();
    const Sample sample = make_sample();
    const auto assignment = assignment_of({"hate", "toxicity"});
    const PromptTemplate tmpl = builtin_template("reasoning-v1");

    JudgeProfile profile;
    profile.judge_id = "j1";
    profile.model_name = "m";
    profile.endpoint = "mock://x";
    profile.max_retries = 1;

    SUBCASE("garbage then valid output within the retry budget") {
        class GarbageThenValid : public ChatBackend {
        public:
            int calls = 0;
            std::string complete(const ChatRequest&) override {
                ++calls;
                if (calls == 1) return "cannot comply";
                return "hate | 1 | r\ntoxicity | 0 | r";
            }
        } backend;
        const JudgeVerdict verdict =
            collect_verdict(profile, backend, sample, assignment, reg, tmpl);
        CHECK(verdict.status == VerdictStatus::ok);
        CHECK(backend.calls == 2);
        CHECK(verdict.labels.size() == 2);
    }

    SUBCASE("persistent garbage ends as parse_failed") {
        class AlwaysGarbage : public ChatBackend {
        public:
            std::string complete(const ChatRequest&) override { return "no verdict here"; }
        } backend;
        const JudgeVerdict verdict =
            collect_verdict(profile, backend, sample, assignment, reg, tmpl);
        CHECK(verdict.status == VerdictStatus::parse_failed);
        CHECK(verdict.labels.empty());
        CHECK(verdict.raw_output == "no verdict here");
    }

    SUBCASE("transport exhaustion ends as backend_failed") {
        FlakyBackend backend(99, "unreachable");
        const JudgeVerdict verdict =
            collect_verdict(profile, backend, sample, assignment, reg, tmpl);
        CHECK(verdict.status == VerdictStatus::backend_failed);
    }

    SUBCASE("per-metric prompting merges one verdict per metric") {
        MockChatBackend backend;
        const JudgeVerdict merged =
            collect_verdict(profile, backend, sample, assignment, reg, tmpl,
                            /*per_metric_prompts=*/true);
        CHECK(merged.status == VerdictStatus::ok);
        CHECK(merged.labels.count("hate") == 1);
        CHECK(merged.labels.count("toxicity") == 1);
    }
}

TEST_CASE("roster loading validates judge uniqueness and fields") {
    tovo::test::TempDir tmp;
    const std::string path = tmp.file("roster.json");

    tovo::test::write_text(path, R"([
      {"judge_id": "a", "endpoint": "mock://x"},
      {"judge_id": "a", "endpoint": "mock://y"}
    ])");
    CHECK_THROWS_CODE(load_roster(path), ErrorCode::invalid_config);

    tovo::test::write_text(path, R"([{"judge_id": "a", "endpoint": "mock://x", "max_retries": -1}])");
    CHECK_THROWS_CODE(load_roster(path), ErrorCode::invalid_config);

    CHECK(default_roster().size() == 6);
}
