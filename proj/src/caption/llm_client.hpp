#ifndef SSC_CAPTION_LLM_CLIENT_HPP
#define SSC_CAPTION_LLM_CLIENT_HPP

#include <functional>
#include <string>
#include <vector>

#include "caption/prompt.hpp"

namespace ssc {

struct LlmConfig {
    std::string base_url = "https://api.openai.com"; // scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model_id = "gpt-3.5-turbo";
    std::string api_key_env = "SSC_LLM_API_KEY";
    double temperature = 0.0;
    int max_attempts = 3;
    int backoff_ms = 200; // doubled per retry
    int timeout_s = 60;
};

struct CompletionResult {
    std::string text;
    std::string raw_metadata; // provider response minus the content body
};

class CaptionClient {
public:
    virtual ~CaptionClient() = default;
    virtual CompletionResult complete(const PromptPackage& prompt,
                                      const LlmConfig& cfg) = 0;
};

// Test double: replays a scripted sequence of outcomes. An entry with
// `fail_transient` throws RateLimitError; otherwise `text` is returned.
class StubCaptionClient : public CaptionClient {
public:
    struct Step {
        bool fail_transient = false;
        std::string text;
    };
    explicit StubCaptionClient(std::vector<Step> steps);
    // Convenience: echoes the prompt's user text forever.
    StubCaptionClient();

    CompletionResult complete(const PromptPackage& prompt,
                              const LlmConfig& cfg) override;
    int calls() const { return calls_; }

private:
    std::vector<Step> steps_;
    bool echo_ = false;
    int calls_ = 0;
};

// Chat-completion HTTP client. Sends {model, messages, max_tokens,
// temperature}; reads the first choice's message content. Authentication
// token is read from the environment variable named in the config.
class HttpCaptionClient : public CaptionClient {
public:
    CompletionResult complete(const PromptPackage& prompt,
                              const LlmConfig& cfg) override;
};

struct SoundscapeCaption {
    std::string clip_id;
    std::string text;
    std::string model_id;
    std::string template_version;
    std::string raw_metadata;
    int attempts = 0;
};

// Runs the client with bounded retries (exponential backoff, at most
// cfg.max_attempts tries) on transient failures; auth failures are not
// retried, and an empty caption raises EmptyResponseError.
SoundscapeCaption generate_caption(const std::string& clip_id,
                                   const PromptPackage& prompt,
                                   CaptionClient& client,
                                   const LlmConfig& cfg);

} // namespace ssc

#endif
