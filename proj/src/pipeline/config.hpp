#ifndef SSC_PIPELINE_CONFIG_HPP
#define SSC_PIPELINE_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "caption/llm_client.hpp"
#include "model/network.hpp"
#include "train/trainer.hpp"

namespace ssc {

// Everything a pipeline run needs: artifact paths, the binarization and
// caption thresholds, model/training/caption settings. Defaults are the
// reference values; every override is echoed in the run metadata.
struct PipelineConfig {
    // paths (relative paths are taken as-is, resolved against the cwd)
    std::string manifest_path = "data/manifest.csv";
    std::string calibration_path = "data/calibration.wav"; // 1 kHz reference
    std::string tagger_dir = "data/tagger";
    std::string feature_dir = "artifacts/features";
    std::string checkpoint_dir = "artifacts/checkpoints";
    std::string output_dir = "artifacts/outputs";
    std::string prompt_template_path; // empty = built-in template

    // thresholds
    double per_second_threshold = 0.5; // per-second tagger binarization
    double clip_threshold = 0.1;       // clip-level hard event labels
    double caption_threshold = 0.3;    // events retained in prompts

    ModelConfig model;
    TrainConfig train;
    LlmConfig llm;
    bool llm_stub = true; // offline echo client unless disabled

    std::uint64_t seed = 0;
    int jobs = 1;
};

PipelineConfig load_pipeline_config(const std::string& path);
void save_pipeline_config(const std::string& path,
                          const PipelineConfig& cfg);

// Canonical JSON dump (sorted keys) and its hash; artifacts are stamped
// with this value.
std::string config_canonical(const PipelineConfig& cfg);
std::uint64_t config_hash(const PipelineConfig& cfg);

// Applies "dotted.key=value" (e.g. train.batch_size=4). Unknown keys raise
// ValidationError.
void apply_override(PipelineConfig& cfg, const std::string& assignment);

} // namespace ssc

#endif
