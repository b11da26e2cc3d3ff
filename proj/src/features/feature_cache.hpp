#ifndef SSC_FEATURES_FEATURE_CACHE_HPP
#define SSC_FEATURES_FEATURE_CACHE_HPP

#include <cstdint>
#include <string>

#include "features/types.hpp"

namespace ssc {

// One binary file per clip holding both feature matrices plus shape and hop
// metadata. The format carries a version and the config hash that produced
// it; readers reject mismatched versions.
inline constexpr uint32_t kFeatureFileVersion = 1;

void save_features(const FeaturePair& features, uint64_t config_hash,
                   const std::string& path);
FeaturePair load_features(const std::string& path,
                          uint64_t* config_hash_out = nullptr);
bool feature_file_exists(const std::string& path);

std::string feature_cache_path(const std::string& cache_dir,
                               const std::string& clip_id);

} // namespace ssc

#endif
