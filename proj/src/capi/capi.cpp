#include "soundscaper.h"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstring>
#include <string>

#include "common/errors.hpp"
#include "model/network.hpp"
#include "objectives/circumplex.hpp"
#include "pipeline/config.hpp"
#include "pipeline/pipeline.hpp"
#include "thumbs/thumbs.hpp"

namespace {

thread_local std::string g_last_error;

ssc_status status_for_kind(const std::string& kind) {
    if (kind == "ParseError") return SSC_ERR_PARSE;
    if (kind == "ValidationError" || kind == "VocabularyError" ||
        kind == "EmptySplitError" || kind == "EmptyGroupError" ||
        kind == "DegenerateClassError" || kind == "ConstantInputError" ||
        kind == "AllZeroDifferencesError" || kind == "SampleSizeError" ||
        kind == "ZeroVarianceError" || kind == "TemplateError" ||
        kind == "TooShortError" || kind == "InputTooShortError")
        return SSC_ERR_VALIDATION;
    if (kind == "IoError") return SSC_ERR_IO;
    if (kind == "MissingArtifact" || kind == "MissingAudioError" ||
        kind == "CacheMissError")
        return SSC_ERR_MISSING;
    if (kind == "RangeError" || kind == "DomainError" ||
        kind == "SizeError" || kind == "LengthError" ||
        kind == "ShapeError")
        return SSC_ERR_RANGE;
    if (kind == "HashMismatchError" || kind == "VersionError")
        return SSC_ERR_STATE;
    if (kind == "AuthError") return SSC_ERR_AUTH;
    if (kind == "RateLimitError" || kind == "EmptyResponseError")
        return SSC_ERR_UNAVAILABLE;
    return SSC_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ssc_status fail(ssc_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

ssc_status arg_error(const char* what) {
    return fail(SSC_ERR_ARGUMENT, std::string("ArgumentError: ") + what);
}

// Runs `fn` (returning the summary string) under the standard error mapping.
template <typename Fn>
ssc_status guarded(char** summary_out, Fn&& fn) {
    try {
        const std::string summary = fn();
        if (summary_out != nullptr) *summary_out = dup_string(summary);
        g_last_error.clear();
        return SSC_OK;
    } catch (const ssc::Error& e) {
        return fail(status_for_kind(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail(SSC_ERR_INTERNAL, std::string("Internal: ") + e.what());
    }
}

const ssc::PipelineConfig& unwrap(const ssc_config* cfg) {
    return *reinterpret_cast<const ssc::PipelineConfig*>(cfg);
}

ssc::PipelineConfig& unwrap(ssc_config* cfg) {
    return *reinterpret_cast<ssc::PipelineConfig*>(cfg);
}

ssc_config* wrap(ssc::PipelineConfig* cfg) {
    return reinterpret_cast<ssc_config*>(cfg);
}

} // namespace

extern "C" {

const char* ssc_last_error(void) { return g_last_error.c_str(); }

const char* ssc_version(void) { return "1.0.0"; }

void ssc_string_free(char* s) { std::free(s); }

ssc_status ssc_config_create(ssc_config** out) {
    if (out == nullptr) return arg_error("out is null");
    *out = wrap(new ssc::PipelineConfig());
    g_last_error.clear();
    return SSC_OK;
}

ssc_status ssc_config_load(const char* path, ssc_config** out) {
    if (path == nullptr || out == nullptr)
        return arg_error("path/out is null");
    try {
        *out = wrap(new ssc::PipelineConfig(ssc::load_pipeline_config(path)));
        g_last_error.clear();
        return SSC_OK;
    } catch (const ssc::Error& e) {
        return fail(status_for_kind(e.kind()), e.what());
    } catch (const std::exception& e) {
        return fail(SSC_ERR_INTERNAL, std::string("Internal: ") + e.what());
    }
}

ssc_status ssc_config_override(ssc_config* cfg, const char* assignment) {
    if (cfg == nullptr || assignment == nullptr)
        return arg_error("cfg/assignment is null");
    return guarded(nullptr, [&] {
        ssc::apply_override(unwrap(cfg), assignment);
        return std::string();
    });
}

ssc_status ssc_config_set_seed(ssc_config* cfg, uint64_t seed) {
    if (cfg == nullptr) return arg_error("cfg is null");
    unwrap(cfg).seed = seed;
    g_last_error.clear();
    return SSC_OK;
}

ssc_status ssc_config_hash(const ssc_config* cfg, uint64_t* out) {
    if (cfg == nullptr || out == nullptr) return arg_error("cfg/out is null");
    *out = ssc::config_hash(unwrap(cfg));
    g_last_error.clear();
    return SSC_OK;
}

ssc_status ssc_config_dump(const ssc_config* cfg, char** json_out) {
    if (cfg == nullptr || json_out == nullptr)
        return arg_error("cfg/json_out is null");
    *json_out = dup_string(ssc::config_canonical(unwrap(cfg)));
    g_last_error.clear();
    return SSC_OK;
}

void ssc_config_destroy(ssc_config* cfg) {
    delete reinterpret_cast<ssc::PipelineConfig*>(cfg);
}

ssc_status ssc_make_fixture(const char* root, uint64_t seed,
                            char** summary_out) {
    if (root == nullptr) return arg_error("root is null");
    return guarded(summary_out,
                   [&] { return ssc::run_make_fixture(root, seed); });
}

ssc_status ssc_extract_features(const ssc_config* cfg, char** summary_out) {
    if (cfg == nullptr) return arg_error("cfg is null");
    return guarded(summary_out,
                   [&] { return ssc::run_extract_features(unwrap(cfg)); });
}

ssc_status ssc_pseudo_label(const ssc_config* cfg, char** summary_out) {
    if (cfg == nullptr) return arg_error("cfg is null");
    return guarded(summary_out,
                   [&] { return ssc::run_pseudo_label(unwrap(cfg)); });
}

ssc_status ssc_split(const ssc_config* cfg, size_t n_train, size_t n_val,
                     size_t n_test, char** summary_out) {
    if (cfg == nullptr) return arg_error("cfg is null");
    return guarded(summary_out, [&] {
        return ssc::run_split(unwrap(cfg), n_train, n_val, n_test);
    });
}

ssc_status ssc_train(const ssc_config* cfg, char** summary_out) {
    if (cfg == nullptr) return arg_error("cfg is null");
    return guarded(summary_out, [&] { return ssc::run_train(unwrap(cfg)); });
}

ssc_status ssc_predict(const ssc_config* cfg, const char* split,
                       char** summary_out) {
    if (cfg == nullptr || split == nullptr)
        return arg_error("cfg/split is null");
    return guarded(summary_out,
                   [&] { return ssc::run_predict(unwrap(cfg), split); });
}

ssc_status ssc_caption(const ssc_config* cfg, const char* split, int force,
                       char** summary_out) {
    if (cfg == nullptr || split == nullptr)
        return arg_error("cfg/split is null");
    return guarded(summary_out, [&] {
        return ssc::run_caption(unwrap(cfg), split, force != 0);
    });
}

ssc_status ssc_score_captions(const ssc_config* cfg, const char* ratings_csv,
                              char** summary_out) {
    if (cfg == nullptr || ratings_csv == nullptr)
        return arg_error("cfg/ratings_csv is null");
    return guarded(summary_out, [&] {
        return ssc::run_score_captions(unwrap(cfg), ratings_csv);
    });
}

ssc_status ssc_analyze_correlations(const ssc_config* cfg, const char* split,
                                    char** summary_out) {
    if (cfg == nullptr || split == nullptr)
        return arg_error("cfg/split is null");
    return guarded(summary_out, [&] {
        return ssc::run_analyze_correlations(unwrap(cfg), split);
    });
}

ssc_status ssc_iso_pleasantness(const double aq[8], double* out) {
    if (aq == nullptr || out == nullptr) return arg_error("aq/out is null");
    return guarded(nullptr, [&] {
        std::array<double, ssc::kNumAq> r;
        std::copy(aq, aq + ssc::kNumAq, r.begin());
        *out = ssc::iso_pleasantness(r);
        return std::string();
    });
}

ssc_status ssc_iso_eventfulness(const double aq[8], double* out) {
    if (aq == nullptr || out == nullptr) return arg_error("aq/out is null");
    return guarded(nullptr, [&] {
        std::array<double, ssc::kNumAq> r;
        std::copy(aq, aq + ssc::kNumAq, r.begin());
        *out = ssc::iso_eventfulness(r);
        return std::string();
    });
}

ssc_status ssc_thumbs_score(double p, double r, double f, double c, double i,
                            double* out) {
    if (out == nullptr) return arg_error("out is null");
    return guarded(nullptr, [&] {
        ssc::ThumbsRating rating;
        rating.p = p;
        rating.r = r;
        rating.f = f;
        rating.c = c;
        rating.i = i;
        *out = ssc::thumbs_score(rating);
        return std::string();
    });
}

ssc_status ssc_model_param_count(const ssc_config* cfg, uint64_t* out) {
    if (cfg == nullptr || out == nullptr) return arg_error("cfg/out is null");
    return guarded(nullptr, [&] {
        ssc::SoundAQnet net(unwrap(cfg).model);
        *out = net.num_params();
        return std::string();
    });
}

} // extern "C"
