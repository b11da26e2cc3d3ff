#ifndef SSC_MODEL_CHECKPOINT_HPP
#define SSC_MODEL_CHECKPOINT_HPP

#include <cstdint>
#include <map>
#include <string>

#include "model/network.hpp"

namespace ssc {

// Versioned container of named tensors (weights, uncertainty parameters and
// batch-norm running statistics) stamped with the model-config hash.
struct Checkpoint {
    std::uint64_t config_hash = 0;
    std::string config_desc;
    std::map<std::string, Tensor> tensors;
};

Checkpoint snapshot(SoundAQnet& net);
void restore(SoundAQnet& net, const Checkpoint& ck);

void save_checkpoint(const std::string& path, SoundAQnet& net);
Checkpoint load_checkpoint(const std::string& path);
void load_checkpoint_into(const std::string& path, SoundAQnet& net);

} // namespace ssc

#endif
