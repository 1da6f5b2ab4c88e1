#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "driveloop/decoder.hpp"
#include "driveloop/policy.hpp"

namespace driveloop {

// Versioned binary checkpoint: magic, version, kind, dims, then the flat
// little-endian float64 parameter array in the canonical view order.
// Loaders reject dimension or kind mismatches.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_policy_checkpoint(const PolicyParams& params,
                            const std::filesystem::path& path);
PolicyParams load_policy_checkpoint(const std::filesystem::path& path);

void save_decoder_checkpoint(const DecoderParams& params,
                             const std::filesystem::path& path);
DecoderParams load_decoder_checkpoint(const std::filesystem::path& path);

// FNV-1a of the serialized parameter bytes; used for reference-snapshot
// identity checks and manifests.
std::uint64_t params_hash(const PolicyParams& params);
std::uint64_t params_hash(const DecoderParams& params);

}  // namespace driveloop
