#pragma once

#include "tovo/json_util.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tovo {

enum class Role { user, assistant };
enum class Origin { single_turn, multi_turn };

std::string role_name(Role role);
Role parse_role(const std::string& name);
std::string origin_name(Origin origin);
Origin parse_origin(const std::string& name);

struct Turn {
    Role role = Role::user;
    std::string text;

    bool operator==(const Turn&) const = default;
};

struct Conversation {
    std::string id;
    std::vector<Turn> turns;
    Origin origin = Origin::single_turn;
    std::optional<double> prefilter_score;

    /// Role-tagged transcript, one "ROLE: text" line per turn. This is the
    /// serialization judges see for multi-turn prompts.
    std::string transcript() const;
    /// Text of the last assistant turn, if any.
    const std::string* last_assistant_text() const;
    /// Turns up to (excluding) the last assistant turn; the "prompt" side.
    std::string prompt_transcript() const;

    json to_json() const;
    static Conversation from_json(const json& j);
};

/// single_turn iff exactly one user turn precedes the final assistant
/// position (end of conversation when no assistant turn exists).
Origin classify_origin(const std::vector<Turn>& turns);

struct Sample {
    std::string id;
    Conversation conversation;
    std::string response;
    std::string responder_id;

    json to_json() const;
    static Sample from_json(const json& j);
};

struct IngestResult {
    std::vector<Conversation> conversations;
    std::size_t malformed = 0;
    std::size_t total_lines = 0;  // non-blank lines seen
};

/// Read a corpus file (one JSON conversation per line). Malformed lines are
/// counted and skipped; more than 10% malformed rejects the whole corpus.
IngestResult ingest(const std::string& path);
IngestResult ingest_text(const std::string& text, const std::string& origin);

class ToxicityScorer {
public:
    virtual ~ToxicityScorer() = default;
    virtual std::string id() const = 0;
    /// Probability-like toxicity score in [0, 1]. May throw; prefilter skips
    /// the item with a warning.
    virtual double score(const std::string& text) = 0;
};

/// Transparent, deterministic, dependency-free default: case-insensitive
/// token match against a weighted lexicon, combined as 1 - prod(1 - w).
class LexiconScorer : public ToxicityScorer {
public:
    LexiconScorer();  // built-in demo lexicon
    explicit LexiconScorer(std::map<std::string, double> lexicon);

    std::string id() const override { return "lexicon-v1"; }
    double score(const std::string& text) override;

private:
    std::map<std::string, double> lexicon_;
};

/// Adapter for HateBERT-class remote scorers: POST {"text": ...} to the
/// endpoint, expect {"score": <real>} back.
class RemoteScorer : public ToxicityScorer {
public:
    RemoteScorer(std::string endpoint, int max_retries = 2);

    std::string id() const override { return "remote:" + endpoint_; }
    double score(const std::string& text) override;

private:
    std::string endpoint_;
    int max_retries_;
};

enum class PrefilterTarget { response, prompt, transcript };

PrefilterTarget parse_prefilter_target(const std::string& name);
std::string prefilter_target_name(PrefilterTarget target);

struct PrefilterResult {
    std::vector<Conversation> retained;
    std::size_t scored = 0;
    std::size_t skipped = 0;  // scorer failures
};

/// Keep conversations whose score strictly exceeds threshold, stamping
/// prefilter_score on the survivors. Scorer failures skip the item.
PrefilterResult prefilter(const std::vector<Conversation>& convs, ToxicityScorer& scorer,
                          double threshold, PrefilterTarget target = PrefilterTarget::response);

/// Uniform without-replacement draw of n_single single-turn and n_multi
/// multi-turn conversations. Deterministic given seed.
std::vector<Conversation> stratified_sample(const std::vector<Conversation>& pool,
                                            std::size_t n_single, std::size_t n_multi,
                                            std::uint64_t seed);

class ResponderBackend {
public:
    virtual ~ResponderBackend() = default;
    virtual std::string id() const = 0;
    /// Response text for the conversation's prompt. Throwing or returning
    /// empty text drops the item (after backend-policy retries).
    virtual std::string generate(const Conversation& conv) = 0;
    virtual int max_retries() const { return 0; }
};

/// Copies the corpus's own final assistant turn verbatim; for corpora that
/// already ship responses.
class PassthroughResponder : public ResponderBackend {
public:
    std::string id() const override { return "passthrough"; }
    std::string generate(const Conversation& conv) override;
};

/// Deterministic canned responder for hermetic runs and fixtures.
class MockResponder : public ResponderBackend {
public:
    std::string id() const override { return "mock-responder"; }
    std::string generate(const Conversation& conv) override;
};

struct AttachResult {
    std::vector<Sample> samples;
    std::size_t dropped = 0;
};

AttachResult attach_responses(const std::vector<Conversation>& convs,
                              ResponderBackend& generator, int parallelism = 1);

}  // namespace tovo
