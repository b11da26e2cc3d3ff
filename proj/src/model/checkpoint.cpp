#include "model/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "common/errors.hpp"

namespace ssc {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw IoError("truncated checkpoint");
    return v;
}

void put_string(std::ofstream& out, const std::string& s) {
    put<std::uint32_t>(out, std::uint32_t(s.size()));
    out.write(s.data(), std::streamsize(s.size()));
}

std::string get_string(std::ifstream& in) {
    const auto n = get<std::uint32_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), std::streamsize(n));
    if (!in) throw IoError("truncated checkpoint");
    return s;
}

void put_tensor(std::ofstream& out, const std::string& name, const Tensor& t) {
    put_string(out, name);
    put<std::uint32_t>(out, std::uint32_t(t.rank()));
    for (int i = 0; i < t.rank(); ++i) put<std::int32_t>(out, t.dim(i));
    out.write(reinterpret_cast<const char*>(t.data()),
              std::streamsize(t.size() * sizeof(double)));
}

} // namespace

Checkpoint snapshot(SoundAQnet& net) {
    Checkpoint ck;
    ck.config_hash = net.config().hash();
    ck.config_desc = net.config().describe();
    for (Param* p : net.params()) ck.tensors.emplace(p->name, p->value);
    for (const NamedTensor& b : net.buffers())
        ck.tensors.emplace(b.name, *b.tensor);
    return ck;
}

void restore(SoundAQnet& net, const Checkpoint& ck) {
    if (ck.config_hash != net.config().hash())
        throw HashMismatchError(
            "checkpoint was produced by a different model configuration (" +
            ck.config_desc + " vs " + net.config().describe() + ")");
    auto assign = [&](const std::string& name, Tensor& dst) {
        auto it = ck.tensors.find(name);
        if (it == ck.tensors.end())
            throw MissingArtifact("checkpoint lacks tensor " + name);
        if (it->second.shape() != dst.shape())
            throw ShapeError("checkpoint tensor " + name + " has shape " +
                             it->second.shape_str() + ", expected " +
                             dst.shape_str());
        dst = it->second;
    };
    for (Param* p : net.params()) assign(p->name, p->value);
    for (const NamedTensor& b : net.buffers()) assign(b.name, *b.tensor);
}

void save_checkpoint(const std::string& path, SoundAQnet& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    const Checkpoint ck = snapshot(net);
    put<std::uint64_t>(out, ck.config_hash);
    put_string(out, ck.config_desc);
    put<std::uint32_t>(out, std::uint32_t(ck.tensors.size()));
    for (const auto& [name, t] : ck.tensors) put_tensor(out, name, t);
    if (!out) throw IoError("failed writing " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw MissingArtifact("checkpoint " + path + " does not exist");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ParseError(path + " is not a checkpoint file");
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw VersionError("checkpoint version " + std::to_string(version) +
                           " unsupported (expected " +
                           std::to_string(kVersion) + ")");
    Checkpoint ck;
    ck.config_hash = get<std::uint64_t>(in);
    ck.config_desc = get_string(in);
    const auto count = get<std::uint32_t>(in);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::string name = get_string(in);
        const auto rank = get<std::uint32_t>(in);
        std::vector<int> shape(rank);
        for (auto& d : shape) d = get<std::int32_t>(in);
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.data()),
                std::streamsize(t.size() * sizeof(double)));
        if (!in) throw IoError("truncated checkpoint tensor " + name);
        ck.tensors.emplace(name, std::move(t));
    }
    return ck;
}

void load_checkpoint_into(const std::string& path, SoundAQnet& net) {
    restore(net, load_checkpoint(path));
}

} // namespace ssc
