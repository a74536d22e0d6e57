#include "tovo/sourcing.hpp"

#include "tovo/errors.hpp"
#include "tovo/http.hpp"
#include "tovo/parallel.hpp"
#include "tovo/rng.hpp"

#include <spdlog/spdlog.h>

#include <cctype>
#include <fstream>
#include <sstream>

namespace tovo {

std::string role_name(Role role) {
    return role == Role::user ? "user" : "assistant";
}

Role parse_role(const std::string& name) {
    if (name == "user") return Role::user;
    if (name == "assistant") return Role::assistant;
    throw Error::config("unknown role: " + name);
}

std::string origin_name(Origin origin) {
    return origin == Origin::single_turn ? "single_turn" : "multi_turn";
}

Origin parse_origin(const std::string& name) {
    if (name == "single_turn") return Origin::single_turn;
    if (name == "multi_turn") return Origin::multi_turn;
    throw Error::config("unknown origin: " + name);
}

Origin classify_origin(const std::vector<Turn>& turns) {
    std::size_t boundary = turns.size();
    for (std::size_t i = turns.size(); i > 0; --i) {
        if (turns[i - 1].role == Role::assistant) {
            boundary = i - 1;
            break;
        }
    }
    std::size_t users_before = 0;
    for (std::size_t i = 0; i < boundary; ++i) {
        if (turns[i].role == Role::user) ++users_before;
    }
    return users_before == 1 ? Origin::single_turn : Origin::multi_turn;
}

std::string Conversation::transcript() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (i) out << '\n';
        out << (turns[i].role == Role::user ? "USER: " : "ASSISTANT: ") << turns[i].text;
    }
    return out.str();
}

const std::string* Conversation::last_assistant_text() const {
    for (std::size_t i = turns.size(); i > 0; --i) {
        if (turns[i - 1].role == Role::assistant) return &turns[i - 1].text;
    }
    return nullptr;
}

std::string Conversation::prompt_transcript() const {
    std::size_t boundary = turns.size();
    for (std::size_t i = turns.size(); i > 0; --i) {
        if (turns[i - 1].role == Role::assistant) {
            boundary = i - 1;
            break;
        }
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < boundary; ++i) {
        if (i) out << '\n';
        out << (turns[i].role == Role::user ? "USER: " : "ASSISTANT: ") << turns[i].text;
    }
    return out.str();
}

json Conversation::to_json() const {
    json turns_json = json::array();
    for (const auto& t : turns) {
        turns_json.push_back(json{{"role", role_name(t.role)}, {"text", t.text}});
    }
    json j{{"id", id}, {"turns", std::move(turns_json)}, {"origin", origin_name(origin)}};
    if (prefilter_score) j["prefilter_score"] = *prefilter_score;
    return j;
}

Conversation Conversation::from_json(const json& j) {
    if (!j.is_object()) throw Error::config("conversation is not an object");
    Conversation conv;
    conv.id = j.at("id").get<std::string>();
    const auto& turns = j.at("turns");
    if (!turns.is_array() || turns.empty()) throw Error::config("turns must be a nonempty array");
    for (const auto& t : turns) {
        conv.turns.push_back(Turn{parse_role(t.at("role").get<std::string>()),
                                  t.at("text").get<std::string>()});
    }
    conv.origin = j.contains("origin") ? parse_origin(j.at("origin").get<std::string>())
                                       : classify_origin(conv.turns);
    if (j.contains("prefilter_score")) conv.prefilter_score = j.at("prefilter_score").get<double>();
    return conv;
}

json Sample::to_json() const {
    return json{{"id", id},
                {"conversation", conversation.to_json()},
                {"response", response},
                {"responder_id", responder_id}};
}

Sample Sample::from_json(const json& j) {
    Sample s;
    s.id = j.at("id").get<std::string>();
    s.conversation = Conversation::from_json(j.at("conversation"));
    s.response = j.at("response").get<std::string>();
    s.responder_id = j.at("responder_id").get<std::string>();
    if (s.response.empty()) throw Error::config("sample response is empty");
    return s;
}

IngestResult ingest_text(const std::string& text, const std::string& origin) {
    IngestResult result;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++result.total_lines;
        try {
            result.conversations.push_back(Conversation::from_json(json::parse(line)));
        } catch (const std::exception& e) {
            ++result.malformed;
            spdlog::warn("{}:{}: skipping malformed line: {}", origin, line_no, e.what());
        }
    }
    // A lone bad line never rejects a corpus; past that, >10% malformed does.
    if (result.malformed >= 2 && result.malformed * 10 > result.total_lines) {
        throw Error::corpus_rejected(result.malformed, result.total_lines);
    }
    return result;
}

IngestResult ingest(const std::string& path) {
    return ingest_text(read_file(path), path);
}

namespace {

const std::map<std::string, double>& default_lexicon() {
    static const std::map<std::string, double> lexicon = {
        {"abuse", 0.45},   {"attack", 0.35},  {"bomb", 0.60},    {"cruel", 0.40},
        {"die", 0.35},     {"drugs", 0.40},   {"explosive", 0.55}, {"hate", 0.45},
        {"harm", 0.35},    {"hurt", 0.30},    {"idiot", 0.45},   {"kill", 0.55},
        {"loser", 0.35},   {"murder", 0.60},  {"nude", 0.45},    {"pathetic", 0.35},
        {"poison", 0.50},  {"porn", 0.55},    {"racist", 0.55},  {"revenge", 0.40},
        {"sexist", 0.50},  {"shoot", 0.50},   {"slur", 0.50},    {"stab", 0.55},
        {"steal", 0.40},   {"stupid", 0.35},  {"threat", 0.45},  {"threaten", 0.50},
        {"ugly", 0.30},    {"violence", 0.45}, {"violent", 0.45}, {"weapon", 0.45},
        {"worthless", 0.45},
    };
    return lexicon;
}

std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '\'') {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace

LexiconScorer::LexiconScorer() : lexicon_(default_lexicon()) {}

LexiconScorer::LexiconScorer(std::map<std::string, double> lexicon)
    : lexicon_(std::move(lexicon)) {}

double LexiconScorer::score(const std::string& text) {
    // Each distinct matched term contributes once: 1 - prod(1 - w).
    std::map<std::string, double> hits;
    for (const auto& token : tokenize_lower(text)) {
        auto it = lexicon_.find(token);
        if (it != lexicon_.end()) hits.emplace(it->first, it->second);
    }
    double miss = 1.0;
    for (const auto& [term, weight] : hits) miss *= 1.0 - weight;
    return 1.0 - miss;
}

RemoteScorer::RemoteScorer(std::string endpoint, int max_retries)
    : endpoint_(std::move(endpoint)), max_retries_(max_retries) {}

double RemoteScorer::score(const std::string& text) {
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries_; ++attempt) {
        try {
            auto result = http_post_json(endpoint_, json{{"text", text}});
            if (result.status != 200) {
                last_error = "HTTP " + std::to_string(result.status);
                continue;
            }
            return json::parse(result.body).at("score").get<double>();
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    throw Error::io("remote scorer failed after " + std::to_string(max_retries_ + 1) +
                    " attempts: " + last_error);
}

PrefilterTarget parse_prefilter_target(const std::string& name) {
    if (name == "response") return PrefilterTarget::response;
    if (name == "prompt") return PrefilterTarget::prompt;
    if (name == "transcript") return PrefilterTarget::transcript;
    throw Error::config("unknown prefilter target: " + name);
}

std::string prefilter_target_name(PrefilterTarget target) {
    switch (target) {
        case PrefilterTarget::response: return "response";
        case PrefilterTarget::prompt: return "prompt";
        case PrefilterTarget::transcript: return "transcript";
    }
    return "response";
}

namespace {

std::string scoring_text(const Conversation& conv, PrefilterTarget target) {
    switch (target) {
        case PrefilterTarget::response:
            if (const std::string* text = conv.last_assistant_text()) return *text;
            return conv.transcript();  // no assistant turn to score
        case PrefilterTarget::prompt:
            return conv.prompt_transcript();
        case PrefilterTarget::transcript:
            return conv.transcript();
    }
    return conv.transcript();
}

}  // namespace

PrefilterResult prefilter(const std::vector<Conversation>& convs, ToxicityScorer& scorer,
                          double threshold, PrefilterTarget target) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw Error::config("prefilter threshold must be in [0, 1], got " + std::to_string(threshold));
    }
    PrefilterResult result;
    for (const auto& conv : convs) {
        double score = 0.0;
        try {
            score = scorer.score(scoring_text(conv, target));
        } catch (const std::exception& e) {
            ++result.skipped;
            spdlog::warn("scorer failed on conversation '{}', skipping: {}", conv.id, e.what());
            continue;
        }
        ++result.scored;
        if (score > threshold) {  // strictly exceed
            Conversation kept = conv;
            kept.prefilter_score = score;
            result.retained.push_back(std::move(kept));
        }
    }
    return result;
}

std::vector<Conversation> stratified_sample(const std::vector<Conversation>& pool,
                                            std::size_t n_single, std::size_t n_multi,
                                            std::uint64_t seed) {
    std::vector<std::size_t> singles;
    std::vector<std::size_t> multis;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        (pool[i].origin == Origin::single_turn ? singles : multis).push_back(i);
    }
    if (singles.size() < n_single) {
        throw Error::stratum_exhausted("single_turn", singles.size(), n_single);
    }
    if (multis.size() < n_multi) {
        throw Error::stratum_exhausted("multi_turn", multis.size(), n_multi);
    }

    std::vector<std::size_t> chosen;
    chosen.reserve(n_single + n_multi);
    SeededRng single_rng(derive_seed(seed, "stratum:single"));
    for (std::size_t k : single_rng.sample_indices(n_single, singles.size())) {
        chosen.push_back(singles[k]);
    }
    SeededRng multi_rng(derive_seed(seed, "stratum:multi"));
    for (std::size_t k : multi_rng.sample_indices(n_multi, multis.size())) {
        chosen.push_back(multis[k]);
    }
    std::sort(chosen.begin(), chosen.end());  // keep corpus order

    std::vector<Conversation> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(pool[i]);
    return out;
}

std::string PassthroughResponder::generate(const Conversation& conv) {
    const std::string* text = conv.last_assistant_text();
    if (!text) throw Error::io("conversation '" + conv.id + "' has no assistant turn to pass through");
    return *text;
}

std::string MockResponder::generate(const Conversation& conv) {
    std::string prompt;
    for (std::size_t i = conv.turns.size(); i > 0; --i) {
        if (conv.turns[i - 1].role == Role::user) {
            prompt = conv.turns[i - 1].text;
            break;
        }
    }
    if (prompt.size() > 48) prompt.resize(48);
    return "[mock] canned reply regarding: " + prompt;
}

AttachResult attach_responses(const std::vector<Conversation>& convs,
                              ResponderBackend& generator, int parallelism) {
    struct Outcome {
        bool ok = false;
        Sample sample;
    };

    auto outcomes = parallel_map(convs, parallelism, [&](std::size_t, const Conversation& conv) {
        Outcome outcome;
        const int attempts = 1 + generator.max_retries();
        for (int attempt = 0; attempt < attempts; ++attempt) {
            std::string response;
            try {
                response = generator.generate(conv);
            } catch (const std::exception& e) {
                spdlog::warn("responder failed on '{}' (attempt {}): {}", conv.id, attempt + 1,
                             e.what());
                continue;
            }
            if (response.empty()) {
                spdlog::warn("responder returned empty text for '{}' (attempt {})", conv.id,
                             attempt + 1);
                continue;
            }
            outcome.ok = true;
            outcome.sample = Sample{conv.id, conv, std::move(response), generator.id()};
            break;
        }
        return outcome;
    });

    AttachResult result;
    for (auto& outcome : outcomes) {
        if (outcome.ok) {
            result.samples.push_back(std::move(outcome.sample));
        } else {
            ++result.dropped;
        }
    }
    if (!convs.empty() && result.samples.empty()) throw Error::generation_failed();
    return result;
}

}  // namespace tovo
