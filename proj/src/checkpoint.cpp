#include "driveloop/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "driveloop/error.hpp"
#include "driveloop/rng.hpp"

namespace driveloop {

namespace {

constexpr char kMagic[4] = {'D', 'L', 'C', 'K'};
constexpr std::uint32_t kKindPolicy = 1;
constexpr std::uint32_t kKindDecoder = 2;

static_assert(std::endian::native == std::endian::little,
              "checkpoint layout assumes a little-endian host");

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  auto* p = reinterpret_cast<const std::byte*>(&v);
  out.insert(out.end(), p, p + sizeof(v));
}

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  auto* p = reinterpret_cast<const std::byte*>(&v);
  out.insert(out.end(), p, p + sizeof(v));
}

std::vector<std::byte> serialize(std::uint32_t kind, const std::vector<std::uint32_t>& dims,
                                 const nn::ConstParamViews& views) {
  std::vector<std::byte> out;
  out.insert(out.end(), reinterpret_cast<const std::byte*>(kMagic),
             reinterpret_cast<const std::byte*>(kMagic) + 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, kind);
  put_u32(out, static_cast<std::uint32_t>(dims.size()));
  for (std::uint32_t d : dims) put_u32(out, d);
  std::uint64_t count = nn::total_size(views);
  put_u64(out, count);
  for (const auto& v : views) {
    auto* p = reinterpret_cast<const std::byte*>(v.data());
    out.insert(out.end(), p, p + v.size() * sizeof(double));
  }
  return out;
}

struct Parsed {
  std::uint32_t kind = 0;
  std::vector<std::uint32_t> dims;
  std::vector<double> flat;
};

Parsed parse(const std::filesystem::path& path, std::uint32_t expected_kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("path", "cannot open checkpoint: " + path.string());
  auto read_u32 = [&]() {
    std::uint32_t v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
  };
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("magic", "not a driveloop checkpoint: " + path.string());
  std::uint32_t version = read_u32();
  if (version != kCheckpointVersion)
    throw ValidationError("version", "unsupported checkpoint version");
  Parsed out;
  out.kind = read_u32();
  if (out.kind != expected_kind)
    throw ValidationError("kind", "checkpoint kind mismatch");
  std::uint32_t ndims = read_u32();
  if (ndims > 16) throw ValidationError("dims", "implausible dim count");
  for (std::uint32_t i = 0; i < ndims; ++i) out.dims.push_back(read_u32());
  std::uint64_t count;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  out.flat.resize(count);
  in.read(reinterpret_cast<char*>(out.flat.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw ValidationError("data", "truncated checkpoint: " + path.string());
  return out;
}

void write_file(const std::filesystem::path& path, const std::vector<std::byte>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("path", "cannot write checkpoint: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

void save_policy_checkpoint(const PolicyParams& params,
                            const std::filesystem::path& path) {
  std::vector<std::uint32_t> dims = {static_cast<std::uint32_t>(params.dims.input),
                                     static_cast<std::uint32_t>(params.dims.hidden),
                                     static_cast<std::uint32_t>(params.dims.value_hidden)};
  write_file(path, serialize(kKindPolicy, dims, params.all_views()));
}

PolicyParams load_policy_checkpoint(const std::filesystem::path& path) {
  Parsed parsed = parse(path, kKindPolicy);
  if (parsed.dims.size() != 3) throw ValidationError("dims", "policy checkpoint needs 3 dims");
  PolicyDims dims{static_cast<int>(parsed.dims[0]), static_cast<int>(parsed.dims[1]),
                  static_cast<int>(parsed.dims[2])};
  PolicyParams params = PolicyParams::init(dims, 0);
  auto views = params.all_views();
  if (nn::total_size(nn::ConstParamViews(views.begin(), views.end())) !=
      parsed.flat.size())
    throw ValidationError("data", "policy checkpoint size mismatch");
  nn::unflatten(parsed.flat, views);
  return params;
}

void save_decoder_checkpoint(const DecoderParams& params,
                             const std::filesystem::path& path) {
  std::vector<std::uint32_t> dims = {static_cast<std::uint32_t>(params.dims.emb),
                                     static_cast<std::uint32_t>(params.dims.cond_hidden),
                                     static_cast<std::uint32_t>(params.dims.latent),
                                     static_cast<std::uint32_t>(params.dims.hidden)};
  write_file(path, serialize(kKindDecoder, dims, params.all_views()));
}

DecoderParams load_decoder_checkpoint(const std::filesystem::path& path) {
  Parsed parsed = parse(path, kKindDecoder);
  if (parsed.dims.size() != 4)
    throw ValidationError("dims", "decoder checkpoint needs 4 dims");
  DecoderDims dims{static_cast<int>(parsed.dims[0]), static_cast<int>(parsed.dims[1]),
                   static_cast<int>(parsed.dims[2]), static_cast<int>(parsed.dims[3])};
  DecoderParams params = DecoderParams::init(dims, 0);
  auto views = params.all_views();
  if (nn::total_size(nn::ConstParamViews(views.begin(), views.end())) !=
      parsed.flat.size())
    throw ValidationError("data", "decoder checkpoint size mismatch");
  nn::unflatten(parsed.flat, views);
  return params;
}

std::uint64_t params_hash(const PolicyParams& params) {
  std::vector<std::uint32_t> dims = {static_cast<std::uint32_t>(params.dims.input),
                                     static_cast<std::uint32_t>(params.dims.hidden),
                                     static_cast<std::uint32_t>(params.dims.value_hidden)};
  auto bytes = serialize(kKindPolicy, dims, params.all_views());
  return fnv1a64(std::span<const std::byte>(bytes.data(), bytes.size()));
}

std::uint64_t params_hash(const DecoderParams& params) {
  std::vector<std::uint32_t> dims = {static_cast<std::uint32_t>(params.dims.emb),
                                     static_cast<std::uint32_t>(params.dims.cond_hidden),
                                     static_cast<std::uint32_t>(params.dims.latent),
                                     static_cast<std::uint32_t>(params.dims.hidden)};
  auto bytes = serialize(kKindDecoder, dims, params.all_views());
  return fnv1a64(std::span<const std::byte>(bytes.data(), bytes.size()));
}

}  // namespace driveloop
