#pragma once

#include "tovo/json_util.hpp"
#include "tovo/sourcing.hpp"
#include "tovo/taxonomy.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tovo {

struct JudgeProfile {
    std::string judge_id;
    std::string endpoint;    // http(s)://... or mock:// for the hermetic backend
    std::string model_name;
    int max_retries = 2;
    std::chrono::milliseconds timeout{30000};
    double temperature = 0.0;

    json to_json() const;
    static JudgeProfile from_json(const json& j);
};

/// The stock six-judge roster: six open-weights chat models as configuration,
/// endpoints to be filled in by the operator.
std::vector<JudgeProfile> default_roster();

std::vector<JudgeProfile> load_roster(const std::string& path);

enum class VerdictStatus { ok, parse_failed, backend_failed };

std::string verdict_status_name(VerdictStatus status);
VerdictStatus parse_verdict_status(const std::string& name);

struct JudgeVerdict {
    std::string judge_id;
    std::string sample_id;
    std::map<std::string, int> labels;              // metric_id -> {0,1}
    std::map<std::string, std::string> rationales;  // metric_id -> text
    std::string raw_output;
    VerdictStatus status = VerdictStatus::ok;

    json to_json() const;
    static JudgeVerdict from_json(const json& j);
};

enum class TemplateMode { reasoning, label_only };

TemplateMode parse_template_mode(const std::string& name);
std::string template_mode_name(TemplateMode mode);

struct PromptTemplate {
    std::string template_id;
    TemplateMode mode = TemplateMode::reasoning;
    std::string body;  // must contain {conversation}, {response}, {metrics_block} once each

    /// Throws unless each placeholder appears exactly once.
    void validate() const;
};

/// "reasoning-v1" or "label-only-v1".
PromptTemplate builtin_template(const std::string& template_id);

/// Substitute the sample and the assigned metrics into the template. The
/// metrics block lists one "metric_id: definition" line per assigned metric,
/// in assignment order. Deterministic; throws UnknownMetric for ids missing
/// from the registry.
std::string render_prompt(const Sample& sample, const MetricAssignment& assignment,
                          const Registry& registry, const PromptTemplate& tmpl);

/// Canonical verdict emitter: one "metric_id | label | rationale" line per
/// metric ('|' in rationales escaped as '/'). Mock judges and round-trip
/// tests speak this grammar.
std::string format_verdict(const std::vector<std::string>& metric_ids,
                           const std::map<std::string, int>& labels,
                           const std::map<std::string, std::string>& rationales);

/// Line-scanning parser for judge output. Never throws: missing or
/// unparseable labels yield status=parse_failed with raw_output preserved;
/// metrics outside the expected set are ignored with a warning. Accepted
/// label spellings: 0/1, no/yes, safe/unsafe, false/true (case-insensitive).
JudgeVerdict parse_verdict(const std::string& raw,
                           const std::vector<std::string>& expected_metrics);

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
};

/// A chat-completions transport. complete() returns the assistant message
/// content for one request; throws Error on transport or protocol failure.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

/// POSTs to a /v1/chat/completions-shaped endpoint. Single attempt per
/// complete(); the retry budget lives in query_judge. Reads the bearer token
/// from TOVO_API_KEY when set.
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string endpoint, std::chrono::milliseconds timeout);

    std::string complete(const ChatRequest& request) override;

private:
    std::string endpoint_;
    std::chrono::milliseconds timeout_;
};

/// Deterministic stand-in judge: labels are a pure hash of
/// (model, prompt, metric), so identical runs produce identical datasets.
class MockChatBackend : public ChatBackend {
public:
    std::string complete(const ChatRequest& request) override;
};

/// mock://... -> MockChatBackend, http(s)://... -> HttpChatBackend.
std::unique_ptr<ChatBackend> make_chat_backend(const JudgeProfile& profile);

/// One judged completion with retries on transport errors. Each attempt's
/// latency is logged. Exhausted retries throw BackendFailed(judge_id), the
/// signal for the voting layer to substitute a judge.
std::string query_judge(const JudgeProfile& profile, const std::string& prompt,
                        ChatBackend& backend);

/// render -> query -> parse, re-querying while attempts remain and the
/// previous output failed to parse. Failures come back as status, never as
/// exceptions.
JudgeVerdict collect_verdict(const JudgeProfile& profile, ChatBackend& backend,
                             const Sample& sample, const MetricAssignment& assignment,
                             const Registry& registry, const PromptTemplate& tmpl,
                             bool per_metric_prompts = false);

}  // namespace tovo
