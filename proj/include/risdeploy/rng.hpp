#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace risdeploy {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3"). Bit-exact with the Random123 reference.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

// Stream layout, version 1:
//   key     = (seed & 0xffffffff, seed >> 32)
//   counter = (block, substream & 0xffffffff, substream >> 32, domain)
// Each block yields four 32-bit words consumed in order. A uniform double
// on [0, 1) takes two consecutive words w0, w1 and returns
//   ((uint64(w0) << 32 | w1) >> 11) * 2^-53.
class RngStream {
 public:
  static constexpr std::string_view kIdentity = "philox4x32-10/stream-v1";
  static constexpr std::uint32_t kBlockerDomain = 0x424c4b52;  // "BLKR"

  RngStream(std::uint64_t seed, std::uint64_t substream, std::uint32_t domain = kBlockerDomain);

  std::uint32_t next_u32();
  double next_uniform();

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buffer_{};
  unsigned used_ = 4;
};

}  // namespace risdeploy
