#ifndef SSC_CAPTION_PROMPT_HPP
#define SSC_CAPTION_PROMPT_HPP

#include <array>
#include <string>
#include <vector>

#include "common/domain.hpp"

namespace ssc {

inline constexpr double kCaptionEventThreshold = 0.3;
inline constexpr int kCaptionMaxTokens = 200;

struct EventMention {
    std::string name;
    double prob = 0.0;
};

struct AffectMention {
    std::string name;
    double value = 0.0;
};

// Events with probability strictly above the threshold, sorted by
// descending probability; ties keep vocabulary order.
std::vector<EventMention> threshold_events(
    const std::array<double, kNumEvents>& probs,
    double threshold = kCaptionEventThreshold);

// All eight qualities sorted by descending predicted value; ties keep the
// fixed quality order.
std::vector<AffectMention> rank_affect(const std::array<double, kNumAq>& aq);

struct PromptTemplate {
    std::string version;
    std::string system_text;
    std::string user_text; // may contain {scene}, {event_lines}, {aq_lines}
};

// Template file layout: "version: <v>" first line, then "[system]" and
// "[user]" sections.
PromptTemplate load_prompt_template(const std::string& path);
// The bundled template (same content as assets/caption_prompt_v1.txt).
const PromptTemplate& default_prompt_template();

struct PromptPackage {
    std::string system_text;
    std::string user_text;
    int max_output_tokens = kCaptionMaxTokens;
    std::string template_version;
};

// Deterministic placeholder substitution. Unknown {placeholder} tokens in
// the template raise TemplateError; an empty event list renders as an
// explicit "no salient events detected" line.
PromptPackage build_prompt(const std::string& scene_name,
                           const std::vector<EventMention>& events,
                           const std::vector<AffectMention>& aq_ranked,
                           const PromptTemplate& tmpl);

} // namespace ssc

#endif
