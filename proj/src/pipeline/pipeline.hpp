#ifndef SSC_PIPELINE_PIPELINE_HPP
#define SSC_PIPELINE_PIPELINE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "pipeline/config.hpp"
#include "train/trainer.hpp"

namespace ssc {

// Pipeline stages. Each writes its artifacts under the configured
// directories, records run metadata (subcommand, config hash, seed,
// overrides) under <output_dir>/runs/, and returns a short human-readable
// summary. Failures are reported through the Error hierarchy.

// Feature extraction with caching: clips whose cache file already exists and
// carries the current config hash are skipped.
std::string run_extract_features(const PipelineConfig& cfg);

// Tagger probabilities -> clip-level hard event labels over the fixed
// vocabulary. Writes <output_dir>/pseudo_labels.csv and
// <output_dir>/event_vocabulary.txt.
std::string run_pseudo_label(const PipelineConfig& cfg);

// Random reproducible split assignment written back to the manifest.
std::string run_split(const PipelineConfig& cfg, std::size_t n_train,
                      std::size_t n_val, std::size_t n_test);

// Trains on the manifest's train/val splits; writes best.ckpt, last.ckpt and
// train_log.jsonl under checkpoint_dir and a summary JSON under output_dir.
std::string run_train(const PipelineConfig& cfg);

// Loads best.ckpt and writes predictions for the requested split ("train",
// "val", "test" or "all") to <output_dir>/predictions_<split>.jsonl together
// with evaluation metrics.
std::string run_predict(const PipelineConfig& cfg,
                        const std::string& split = "test");

// Predictions -> prompts -> captions via the configured client (offline stub
// by default). Refuses predictions produced under a different config hash
// unless force is set. Writes <output_dir>/captions_<split>.jsonl.
std::string run_caption(const PipelineConfig& cfg,
                        const std::string& split = "test", bool force = false);

// Rater CSV -> per-group score table plus the expert-vs-system paired test.
// Writes <output_dir>/caption_scores.json.
std::string run_score_captions(const PipelineConfig& cfg,
                               const std::string& ratings_path);

// Spearman matrix of predicted event probabilities against the manifest's
// quality responses. Writes <output_dir>/event_aq_correlations.json.
std::string run_analyze_correlations(const PipelineConfig& cfg,
                                     const std::string& split = "all");

// Writes the synthetic demo dataset and a matching pipeline config under
// `root` (see pipeline/fixture.hpp for the layout).
std::string run_make_fixture(const std::string& root, std::uint64_t seed);

// Loads cached features + manifest labels for one split ("all" = every
// record with an assigned split). Throws CacheMissError when a feature file
// is absent or stale.
std::vector<TrainSample> load_split_samples(const PipelineConfig& cfg,
                                            const std::string& split);

void record_run(const PipelineConfig& cfg, const std::string& subcommand,
                const std::vector<std::string>& overrides = {});

} // namespace ssc

#endif
