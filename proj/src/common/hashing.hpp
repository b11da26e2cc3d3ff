#ifndef SSC_COMMON_HASHING_HPP
#define SSC_COMMON_HASHING_HPP

#include <cstdint>
#include <string>

namespace ssc {

// FNV-1a 64-bit; used to stamp artifacts with the config that produced them.
inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace ssc

#endif
