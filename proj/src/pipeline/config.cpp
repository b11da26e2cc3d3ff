#include "pipeline/config.hpp"

#include <algorithm>
#include <fstream>

#include "common/errors.hpp"
#include "common/hashing.hpp"
#include "common/textio.hpp"

#include "json.hpp"

namespace ssc {

namespace {

using nlohmann::json;

json to_json(const PipelineConfig& c) {
    json j;
    j["paths"]["manifest"] = c.manifest_path;
    j["paths"]["calibration"] = c.calibration_path;
    j["paths"]["tagger_dir"] = c.tagger_dir;
    j["paths"]["feature_dir"] = c.feature_dir;
    j["paths"]["checkpoint_dir"] = c.checkpoint_dir;
    j["paths"]["output_dir"] = c.output_dir;
    j["paths"]["prompt_template"] = c.prompt_template_path;
    j["thresholds"]["per_second"] = c.per_second_threshold;
    j["thresholds"]["clip"] = c.clip_threshold;
    j["thresholds"]["caption"] = c.caption_threshold;
    j["model"]["kernels"] = c.model.kernels;
    j["model"]["filters"] = c.model.filters;
    j["model"]["embed_dim"] = c.model.embed_dim;
    j["model"]["common_dim"] = c.model.common_dim;
    j["model"]["head_hidden"] = c.model.head_hidden;
    j["train"]["learning_rate"] = c.train.learning_rate;
    j["train"]["batch_size"] = c.train.batch_size;
    j["train"]["max_epochs"] = c.train.max_epochs;
    j["train"]["patience"] = c.train.patience;
    j["train"]["patience_start_epoch"] = c.train.patience_start_epoch;
    j["llm"]["base_url"] = c.llm.base_url;
    j["llm"]["path"] = c.llm.path;
    j["llm"]["model_id"] = c.llm.model_id;
    j["llm"]["api_key_env"] = c.llm.api_key_env;
    j["llm"]["temperature"] = c.llm.temperature;
    j["llm"]["max_attempts"] = c.llm.max_attempts;
    j["llm"]["backoff_ms"] = c.llm.backoff_ms;
    j["llm"]["timeout_s"] = c.llm.timeout_s;
    j["llm"]["stub"] = c.llm_stub;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    return j;
}

template <typename T>
void pick(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError("config field " + where + "." + key + ": " +
                              e.what());
    }
}

void from_json(const json& j, PipelineConfig& c) {
    static const std::vector<std::string> known = {
        "paths", "thresholds", "model", "train", "llm", "seed", "jobs"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ValidationError("unknown config key: " + it.key());
    }
    auto check_section = [&](const char* name,
                             const std::vector<std::string>& keys) {
        if (!j.contains(name)) return;
        for (auto it = j.at(name).begin(); it != j.at(name).end(); ++it)
            if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
                throw ValidationError(std::string("unknown config key: ") +
                                      name + "." + it.key());
    };
    check_section("paths",
                  {"manifest", "calibration", "tagger_dir", "feature_dir",
                   "checkpoint_dir", "output_dir", "prompt_template"});
    check_section("thresholds", {"per_second", "clip", "caption"});
    check_section("model",
                  {"kernels", "filters", "embed_dim", "common_dim",
                   "head_hidden"});
    check_section("train", {"learning_rate", "batch_size", "max_epochs",
                            "patience", "patience_start_epoch"});
    check_section("llm",
                  {"base_url", "path", "model_id", "api_key_env",
                   "temperature", "max_attempts", "backoff_ms", "timeout_s",
                   "stub"});

    if (j.contains("paths")) {
        const json& p = j.at("paths");
        pick(p, "manifest", c.manifest_path, "paths");
        pick(p, "calibration", c.calibration_path, "paths");
        pick(p, "tagger_dir", c.tagger_dir, "paths");
        pick(p, "feature_dir", c.feature_dir, "paths");
        pick(p, "checkpoint_dir", c.checkpoint_dir, "paths");
        pick(p, "output_dir", c.output_dir, "paths");
        pick(p, "prompt_template", c.prompt_template_path, "paths");
    }
    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        pick(t, "per_second", c.per_second_threshold, "thresholds");
        pick(t, "clip", c.clip_threshold, "thresholds");
        pick(t, "caption", c.caption_threshold, "thresholds");
    }
    if (j.contains("model")) {
        const json& m = j.at("model");
        pick(m, "kernels", c.model.kernels, "model");
        pick(m, "filters", c.model.filters, "model");
        pick(m, "embed_dim", c.model.embed_dim, "model");
        pick(m, "common_dim", c.model.common_dim, "model");
        pick(m, "head_hidden", c.model.head_hidden, "model");
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        pick(t, "learning_rate", c.train.learning_rate, "train");
        pick(t, "batch_size", c.train.batch_size, "train");
        pick(t, "max_epochs", c.train.max_epochs, "train");
        pick(t, "patience", c.train.patience, "train");
        pick(t, "patience_start_epoch", c.train.patience_start_epoch, "train");
    }
    if (j.contains("llm")) {
        const json& l = j.at("llm");
        pick(l, "base_url", c.llm.base_url, "llm");
        pick(l, "path", c.llm.path, "llm");
        pick(l, "model_id", c.llm.model_id, "llm");
        pick(l, "api_key_env", c.llm.api_key_env, "llm");
        pick(l, "temperature", c.llm.temperature, "llm");
        pick(l, "max_attempts", c.llm.max_attempts, "llm");
        pick(l, "backoff_ms", c.llm.backoff_ms, "llm");
        pick(l, "timeout_s", c.llm.timeout_s, "llm");
        pick(l, "stub", c.llm_stub, "llm");
    }
    pick(j, "seed", c.seed, "");
    pick(j, "jobs", c.jobs, "");
}

} // namespace

PipelineConfig load_pipeline_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    PipelineConfig cfg;
    from_json(j, cfg);
    return cfg;
}

void save_pipeline_config(const std::string& path, const PipelineConfig& cfg) {
    write_text_file(path, to_json(cfg).dump(2) + "\n");
}

std::string config_canonical(const PipelineConfig& cfg) {
    return to_json(cfg).dump(); // nlohmann objects keep sorted key order
}

std::uint64_t config_hash(const PipelineConfig& cfg) {
    return fnv1a64(config_canonical(cfg));
}

void apply_override(PipelineConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("override must look like key=value: " +
                              assignment);
    std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    std::string pointer = "/";
    for (char ch : key) pointer += (ch == '.') ? '/' : ch;

    json j = to_json(cfg);
    const json::json_pointer ptr(pointer);
    if (!j.contains(ptr))
        throw ValidationError("unknown override key: " + key);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value; // plain string
    }
    // Reject type changes (e.g. assigning a string to a number).
    if (j.at(ptr).type() != parsed.type() &&
        !(j.at(ptr).is_number() && parsed.is_number()))
        throw ValidationError("override " + key + " has the wrong type");
    j[ptr] = parsed;
    PipelineConfig next;
    from_json(j, next);
    cfg = next;
}

} // namespace ssc
