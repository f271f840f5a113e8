#include "concury/othello.hpp"

#include <bit>
#include <cstring>

namespace concury {

namespace {
constexpr char kMagic[4] = {'O', 'T', 'H', 'L'};
constexpr uint8_t kVersion = 1;
}  // namespace

std::vector<uint8_t> Othello::serialize() const {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u8(out, kVersion);
  put_u8(out, uint8_t(l));
  put_u8(out, uint8_t(std::countr_zero(m)));
  put_u8(out, uint8_t(std::countr_zero(m)));
  put_u32(out, seeds.seed_a);
  put_u32(out, seeds.seed_b);
  auto pa = a.to_bytes();
  auto pb = b.to_bytes();
  out.insert(out.end(), pa.begin(), pa.end());
  out.insert(out.end(), pb.begin(), pb.end());
  return out;
}

Othello Othello::deserialize(const uint8_t* data, size_t len) {
  if (len < 16 || std::memcmp(data, kMagic, 4) != 0) {
    throw std::invalid_argument("othello: bad snapshot magic");
  }
  if (data[4] != kVersion) {
    throw std::invalid_argument("othello: unsupported snapshot version");
  }
  Othello o;
  o.l = data[5];
  uint32_t ma = uint32_t(1) << data[6];
  uint32_t mb = uint32_t(1) << data[7];
  o.m = ma;
  o.seeds.seed_a = get_u32(data + 8);
  o.seeds.seed_b = get_u32(data + 12);
  size_t bytes_a = (size_t(ma) * o.l + 7) / 8;
  size_t bytes_b = (size_t(mb) * o.l + 7) / 8;
  if (o.l < 1 || o.l > 32 || ma != mb || len < 16 + bytes_a + bytes_b) {
    throw std::invalid_argument("othello: truncated or inconsistent snapshot");
  }
  o.a = BitArray::from_bytes(data + 16, ma, o.l);
  o.b = BitArray::from_bytes(data + 16 + bytes_a, mb, o.l);
  return o;
}

}  // namespace concury
