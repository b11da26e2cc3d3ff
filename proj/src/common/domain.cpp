#include "common/domain.hpp"

namespace ssc {

int scene_index(const std::string& name) {
    for (int i = 0; i < kNumScenes; ++i)
        if (kSceneNames[i] == name) return i;
    return -1;
}

} // namespace ssc
