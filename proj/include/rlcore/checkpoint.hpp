#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlcore/network.hpp"

namespace rlcore {

// On-disk layout (little-endian throughout):
//   magic "D2RLCKPT" | version u32 | tensor count u32 |
//   per tensor: name length u32, UTF-8 name, rank u32, dims u32 each,
//               payload as 32-bit floats.
inline constexpr char kCheckpointMagic[8] = {'D', '2', 'R', 'L', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<float> values;
};

void write_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors);

/// Verifies magic and version; throws IoError on any mismatch or truncation.
std::vector<NamedTensor> read_checkpoint(const std::string& path);

/// Flattens a network into named tensors under the given prefix, e.g.
/// "policy" -> policy.layer1.weight, policy.layer1.bias, ...
std::vector<NamedTensor> network_to_tensors(const Network& net, const std::string& prefix);

/// Loads parameters by name into an already-built network of matching shape.
void load_network_tensors(Network& net, const std::string& prefix,
                          const std::vector<NamedTensor>& tensors);

} // namespace rlcore
