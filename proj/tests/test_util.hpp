#ifndef SSC_TESTS_TEST_UTIL_HPP
#define SSC_TESTS_TEST_UTIL_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

namespace ssc_test {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<std::uint64_t> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("ssc_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& rel = "") const {
        return rel.empty() ? path_.string() : (path_ / rel).string();
    }

private:
    std::filesystem::path path_;
};

inline std::vector<float> sine(double freq_hz, double amplitude,
                               double seconds, int sample_rate) {
    const int n = int(std::lround(seconds * sample_rate));
    std::vector<float> out(std::size_t(n), 0.0f);
    for (int i = 0; i < n; ++i)
        out[std::size_t(i)] = float(
            amplitude * std::sin(2.0 * M_PI * freq_hz * i / sample_rate));
    return out;
}

} // namespace ssc_test

#endif
