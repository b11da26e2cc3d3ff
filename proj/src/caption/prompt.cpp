#include "caption/prompt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "common/errors.hpp"
#include "common/textio.hpp"

namespace ssc {

std::vector<EventMention> threshold_events(
    const std::array<double, kNumEvents>& probs, double threshold) {
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw RangeError("event probability outside [0,1]");
    std::vector<EventMention> out;
    for (int e = 0; e < kNumEvents; ++e)
        if (probs[std::size_t(e)] > threshold)
            out.push_back({kEventNames[std::size_t(e)], probs[std::size_t(e)]});
    std::stable_sort(out.begin(), out.end(),
                     [](const EventMention& a, const EventMention& b) {
                         return a.prob > b.prob;
                     });
    return out;
}

std::vector<AffectMention> rank_affect(const std::array<double, kNumAq>& aq) {
    std::vector<AffectMention> out;
    for (int a = 0; a < kNumAq; ++a)
        out.push_back({kAqNames[std::size_t(a)], aq[std::size_t(a)]});
    std::stable_sort(out.begin(), out.end(),
                     [](const AffectMention& a, const AffectMention& b) {
                         return a.value > b.value;
                     });
    return out;
}

PromptTemplate load_prompt_template(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    PromptTemplate tmpl;
    std::string section;
    for (const std::string& raw : lines) {
        if (tmpl.version.empty() && raw.rfind("version:", 0) == 0) {
            tmpl.version = trim(raw.substr(8));
            continue;
        }
        if (trim(raw) == "[system]") {
            section = "system";
            continue;
        }
        if (trim(raw) == "[user]") {
            section = "user";
            continue;
        }
        if (section == "system")
            tmpl.system_text += (tmpl.system_text.empty() ? "" : "\n") + raw;
        else if (section == "user")
            tmpl.user_text += (tmpl.user_text.empty() ? "" : "\n") + raw;
    }
    if (tmpl.version.empty() || tmpl.system_text.empty() ||
        tmpl.user_text.empty())
        throw TemplateError(path +
                            ": template needs version, [system] and [user]");
    return tmpl;
}

const PromptTemplate& default_prompt_template() {
    static const PromptTemplate tmpl = {
        "v1",
        "You are an expert in soundscape appreciation. ISO 12913-1:2014 "
        "defines a soundscape as the acoustic environment as perceived or "
        "experienced and/or understood by a person or people, in context. "
        "Listeners rate how pleasant, eventful, chaotic, vibrant, uneventful, "
        "calm, annoying and monotonous an acoustic environment feels, each on "
        "a scale from 1 to 5. You turn automatic analysis results into a "
        "faithful, vivid soundscape description.",
        "A recording was made in this acoustic scene: {scene}.\n"
        "Sound events detected in the recording, with probabilities:\n"
        "{event_lines}\n"
        "Predicted affective quality ratings (1 to 5), strongest first:\n"
        "{aq_lines}\n"
        "Step 1: According to the events and their corresponding probability, "
        "infer what is happening in the scene and what a listener would "
        "hear.\n"
        "Step 2: Describe your feelings based on the ratings of the affective "
        "qualities, prioritizing the strongest responses.\n"
        "Then, combining both steps, write a soundscape description within "
        "200 tokens. Write it as one flowing paragraph from a listener's "
        "perspective."};
    return tmpl;
}

namespace {

std::string render(const std::string& text, const std::string& scene,
                   const std::string& event_lines,
                   const std::string& aq_lines) {
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        const std::size_t open = text.find('{', i);
        if (open == std::string::npos) {
            out += text.substr(i);
            break;
        }
        out += text.substr(i, open - i);
        const std::size_t close = text.find('}', open);
        if (close == std::string::npos)
            throw TemplateError("unterminated placeholder in template");
        const std::string key = text.substr(open + 1, close - open - 1);
        if (key == "scene")
            out += scene;
        else if (key == "event_lines")
            out += event_lines;
        else if (key == "aq_lines")
            out += aq_lines;
        else
            throw TemplateError("unknown template placeholder {" + key + "}");
        i = close + 1;
    }
    return out;
}

std::string format_value(double v, int decimals) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(decimals);
    ss << v;
    return ss.str();
}

} // namespace

PromptPackage build_prompt(const std::string& scene_name,
                           const std::vector<EventMention>& events,
                           const std::vector<AffectMention>& aq_ranked,
                           const PromptTemplate& tmpl) {
    std::string event_lines;
    if (events.empty()) {
        event_lines = "- no salient events detected";
    } else {
        for (const EventMention& e : events) {
            if (!event_lines.empty()) event_lines += '\n';
            event_lines += "- " + e.name + " (" + format_value(e.prob, 2) + ")";
        }
    }
    std::string aq_lines;
    for (const AffectMention& a : aq_ranked) {
        if (!aq_lines.empty()) aq_lines += '\n';
        aq_lines += "- " + a.name + ": " + format_value(a.value, 1);
    }
    PromptPackage pkg;
    pkg.system_text = render(tmpl.system_text, scene_name, event_lines, aq_lines);
    pkg.user_text = render(tmpl.user_text, scene_name, event_lines, aq_lines);
    pkg.template_version = tmpl.version;
    pkg.max_output_tokens = kCaptionMaxTokens;
    return pkg;
}

} // namespace ssc
