#include "caption/llm_client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "common/errors.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

namespace ssc {

StubCaptionClient::StubCaptionClient(std::vector<Step> steps)
    : steps_(std::move(steps)) {}

StubCaptionClient::StubCaptionClient() : echo_(true) {}

CompletionResult StubCaptionClient::complete(const PromptPackage& prompt,
                                             const LlmConfig&) {
    const int call = calls_++;
    if (echo_) return {prompt.user_text, "{\"stub\":\"echo\"}"};
    if (call >= int(steps_.size()))
        throw IoError("stub client exhausted its scripted steps");
    const Step& step = steps_[std::size_t(call)];
    if (step.fail_transient)
        throw RateLimitError("stub transient failure on call " +
                             std::to_string(call + 1));
    return {step.text, "{\"stub\":\"scripted\"}"};
}

CompletionResult HttpCaptionClient::complete(const PromptPackage& prompt,
                                             const LlmConfig& cfg) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
        throw AuthError("credential environment variable " + cfg.api_key_env +
                        " is unset");

    nlohmann::json body;
    body["model"] = cfg.model_id;
    body["messages"] = nlohmann::json::array(
        {{{"role", "system"}, {"content", prompt.system_text}},
         {{"role", "user"}, {"content", prompt.user_text}}});
    body["max_tokens"] = prompt.max_output_tokens;
    body["temperature"] = cfg.temperature;

    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(cfg.timeout_s);
    client.set_read_timeout(cfg.timeout_s);
    client.set_bearer_token_auth(key);

    const httplib::Result res =
        client.Post(cfg.path, body.dump(), "application/json");
    if (!res)
        throw IoError("request to " + cfg.base_url +
                      " failed: " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        throw AuthError("provider rejected the credential (HTTP " +
                        std::to_string(res->status) + ")");
    if (res->status == 429)
        throw RateLimitError("provider rate limit (HTTP 429)");
    if (res->status >= 500)
        throw IoError("provider error (HTTP " + std::to_string(res->status) +
                      ")");
    if (res->status != 200)
        throw IoError("unexpected HTTP status " + std::to_string(res->status) +
                      ": " + res->body);

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed provider response: ") +
                         e.what());
    }
    if (!parsed.contains("choices") || parsed["choices"].empty())
        throw EmptyResponseError("provider returned no choices");
    CompletionResult out;
    out.text = parsed["choices"][0].value("message", nlohmann::json::object())
                   .value("content", "");
    nlohmann::json meta = parsed;
    meta.erase("choices");
    meta["finish_reason"] = parsed["choices"][0].value("finish_reason", "");
    out.raw_metadata = meta.dump();
    return out;
}

SoundscapeCaption generate_caption(const std::string& clip_id,
                                   const PromptPackage& prompt,
                                   CaptionClient& client,
                                   const LlmConfig& cfg) {
    int backoff = cfg.backoff_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            const CompletionResult res = client.complete(prompt, cfg);
            if (res.text.empty())
                throw EmptyResponseError("empty caption for clip " + clip_id);
            SoundscapeCaption cap;
            cap.clip_id = clip_id;
            cap.text = res.text;
            cap.model_id = cfg.model_id;
            cap.template_version = prompt.template_version;
            cap.raw_metadata = res.raw_metadata;
            cap.attempts = attempt;
            return cap;
        } catch (const RateLimitError&) {
            if (attempt >= cfg.max_attempts) throw;
        } catch (const IoError&) {
            if (attempt >= cfg.max_attempts) throw;
        }
        if (backoff > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
        backoff *= 2;
    }
}

} // namespace ssc
