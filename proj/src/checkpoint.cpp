#include "rlcore/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <map>

namespace rlcore {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw IoError("checkpoint: truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& os, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(os, bits);
}

float get_f32(std::istream& is) {
    const std::uint32_t bits = get_u32(is);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

} // namespace

void write_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("checkpoint: cannot open for writing: " + path);
    os.write(kCheckpointMagic, 8);
    put_u32(os, kCheckpointVersion);
    put_u32(os, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        put_u32(os, static_cast<std::uint32_t>(t.name.size()));
        os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        put_u32(os, static_cast<std::uint32_t>(t.dims.size()));
        std::size_t expect = 1;
        for (std::uint32_t d : t.dims) {
            put_u32(os, d);
            expect *= d;
        }
        if (expect != t.values.size())
            throw IoError("checkpoint: tensor " + t.name + " dims do not match payload");
        for (float v : t.values) put_f32(os, v);
    }
    if (!os) throw IoError("checkpoint: write failed: " + path);
}

std::vector<NamedTensor> read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw IoError("checkpoint: bad magic in " + path);
    const std::uint32_t version = get_u32(is);
    if (version != kCheckpointVersion)
        throw IoError("checkpoint: unsupported version " + std::to_string(version));
    const std::uint32_t count = get_u32(is);
    std::vector<NamedTensor> tensors;
    tensors.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedTensor t;
        const std::uint32_t name_len = get_u32(is);
        t.name.resize(name_len);
        is.read(t.name.data(), name_len);
        if (!is) throw IoError("checkpoint: truncated name");
        const std::uint32_t rank = get_u32(is);
        std::size_t n = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            t.dims.push_back(get_u32(is));
            n *= t.dims.back();
        }
        t.values.resize(n);
        for (std::size_t j = 0; j < n; ++j) t.values[j] = get_f32(is);
        tensors.push_back(std::move(t));
    }
    return tensors;
}

std::vector<NamedTensor> network_to_tensors(const Network& net, const std::string& prefix) {
    std::vector<NamedTensor> out;
    net.for_each_layer([&](const std::string& name, const LinearLayer& l) {
        NamedTensor w;
        w.name = prefix + "." + name + ".weight";
        w.dims = {static_cast<std::uint32_t>(l.weight.rows),
                  static_cast<std::uint32_t>(l.weight.cols)};
        w.values.reserve(l.weight.size());
        for (double v : l.weight.data) w.values.push_back(static_cast<float>(v));
        out.push_back(std::move(w));

        NamedTensor b;
        b.name = prefix + "." + name + ".bias";
        b.dims = {static_cast<std::uint32_t>(l.bias.size())};
        b.values.reserve(l.bias.size());
        for (double v : l.bias) b.values.push_back(static_cast<float>(v));
        out.push_back(std::move(b));
    });
    return out;
}

void load_network_tensors(Network& net, const std::string& prefix,
                          const std::vector<NamedTensor>& tensors) {
    std::map<std::string, const NamedTensor*> by_name;
    for (const auto& t : tensors) by_name[t.name] = &t;
    net.for_each_layer([&](const std::string& name, LinearLayer& l) {
        const auto wi = by_name.find(prefix + "." + name + ".weight");
        const auto bi = by_name.find(prefix + "." + name + ".bias");
        if (wi == by_name.end() || bi == by_name.end())
            throw IoError("checkpoint: missing tensors for " + prefix + "." + name);
        const NamedTensor& w = *wi->second;
        const NamedTensor& b = *bi->second;
        if (w.dims.size() != 2 || static_cast<int>(w.dims[0]) != l.weight.rows ||
            static_cast<int>(w.dims[1]) != l.weight.cols)
            throw DimensionError("checkpoint: shape mismatch for " + w.name);
        if (b.dims.size() != 1 || b.dims[0] != l.bias.size())
            throw DimensionError("checkpoint: shape mismatch for " + b.name);
        for (std::size_t i = 0; i < l.weight.size(); ++i)
            l.weight.data[i] = static_cast<double>(w.values[i]);
        for (std::size_t i = 0; i < l.bias.size(); ++i)
            l.bias[i] = static_cast<double>(b.values[i]);
    });
}

} // namespace rlcore
